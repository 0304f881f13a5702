"""Exception types shared across the package."""


class ResolutionError(ValueError):
    """A grid or mode band is too small to resolve the requested object."""


class UnresolvedNormError(ResolutionError):
    """The weighted sup defining a norm peaked on the band boundary.

    The returned value would only be a lower bound for the true norm, so
    the computation refuses instead of silently under-reporting.
    """


class StepSizeError(ValueError):
    """A time step violates the phase-resolution rule of a propagator."""


class HorizonError(ValueError):
    """A requested time lies at or beyond the convergence horizon."""


class CapacityError(RuntimeError):
    """A grid/particle-number combination exceeds the feasible frontier."""


class SamplingError(RuntimeError):
    """Too few samples to estimate a self-consistent field reliably."""


class ConfigError(ValueError):
    """Invalid or unknown configuration content."""

    def __init__(self, message, key=None):
        super().__init__(message)
        self.key = key
