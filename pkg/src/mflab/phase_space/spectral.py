"""Symplectic Fourier analysis on phase-space grids.

The transform pair used throughout:

    ft(xi, eta) = integral e^{i(x.xi - v.eta)} f(x, v) dx dv
    f(x, v)     = (period * 2V)^-j * sum_{xi,eta} e^{-i(x.xi - v.eta)} ft

Position modes xi are integers (times 2*pi/period), velocity modes eta
are integer multiples of pi/V.  On band-limited grid data the discrete
pair is an exact bijection; both directions are realized with explicit
DFT matrices, which keeps every convention auditable and is plenty fast
at the grid sizes used here.
"""

from dataclasses import dataclass, field

import numpy as np

from ..errors import ResolutionError
from .grids import PhaseFunction

_matrix_cache = {}


def _axis_matrices(n, period, velocity_cutoff):
    """Forward/backward 1-axis DFT matrices for (x, v) axes."""
    key = (n, float(period), float(velocity_cutoff))
    if key in _matrix_cache:
        return _matrix_cache[key]
    dx = period / n
    dv = 2.0 * velocity_cutoff / n
    x = dx * np.arange(n)
    v = -velocity_cutoff + dv * np.arange(n)
    xi = (np.arange(n) - n // 2) * (2.0 * np.pi / period)
    eta = (np.arange(n) - n // 2) * (np.pi / velocity_cutoff)
    fwd_x = np.exp(1j * np.outer(xi, x)) * dx          # (mode, point)
    fwd_v = np.exp(-1j * np.outer(eta, v)) * dv
    inv_x = np.exp(-1j * np.outer(x, xi)) / period     # (point, mode)
    inv_v = np.exp(1j * np.outer(v, eta)) / (2.0 * velocity_cutoff)
    out = (fwd_x, fwd_v, inv_x, inv_v)
    _matrix_cache[key] = out
    return out


def _apply_axis(values, mat, axis):
    return np.moveaxis(np.tensordot(mat, values, axes=([1], [axis])), 0, axis)


@dataclass(frozen=True)
class ModeGrid:
    """Rectangular mode band: the same xi/eta axes for every particle."""

    particles: int
    xi: np.ndarray
    eta: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "xi", np.asarray(self.xi, dtype=float))
        object.__setattr__(self, "eta", np.asarray(self.eta, dtype=float))

    @property
    def shape(self):
        j = self.particles
        return (len(self.xi),) * j + (len(self.eta),) * j

    def weight_exponent(self):
        """sum_i |xi_i| + |eta_i| broadcast over the band."""
        j = self.particles
        total = np.zeros(self.shape)
        for i in range(j):
            sh = [1] * (2 * j)
            sh[i] = len(self.xi)
            total = total + np.abs(self.xi).reshape(sh)
            sh = [1] * (2 * j)
            sh[j + i] = len(self.eta)
            total = total + np.abs(self.eta).reshape(sh)
        return total

    def __eq__(self, other):
        return (
            isinstance(other, ModeGrid)
            and self.particles == other.particles
            and np.array_equal(self.xi, other.xi)
            and np.array_equal(self.eta, other.eta)
        )

    def __hash__(self):
        return hash((self.particles, self.xi.tobytes(), self.eta.tobytes()))


def mode_grid_of(grid):
    return ModeGrid(grid.particles, grid.xi, grid.eta)


def measurement_band(particles=1, xi_max=8, eta_max=6.0, eta_step=0.25):
    """Low-mode band used when comparing states from different sources."""
    xi = np.arange(-xi_max, xi_max + 1, dtype=float)
    m = int(np.floor(eta_max / eta_step + 1e-12))
    eta = eta_step * np.arange(-m, m + 1)
    return ModeGrid(particles, xi, eta)


class FourierPhaseFunction:
    """Complex mode coefficients of a phase-space function on a band."""

    def __init__(self, modes, values, source_grid=None):
        values = np.asarray(values, dtype=complex)
        if values.shape != modes.shape:
            raise ValueError(f"values shape {values.shape} != band shape {modes.shape}")
        self.modes = modes
        self.values = values
        self.source_grid = source_grid

    @property
    def particles(self):
        return self.modes.particles

    def copy(self):
        return FourierPhaseFunction(self.modes, self.values.copy(), self.source_grid)

    def at_zero(self):
        """Coefficient at the (0, 0) mode; the total mass."""
        ix = int(np.argmin(np.abs(self.modes.xi)))
        ie = int(np.argmin(np.abs(self.modes.eta)))
        if abs(self.modes.xi[ix]) > 1e-12 or abs(self.modes.eta[ie]) > 1e-12:
            raise ValueError("band does not contain the zero mode")
        j = self.particles
        idx = (ix,) * j + (ie,) * j
        return complex(self.values[idx])

    def __sub__(self, other):
        if other.modes != self.modes:
            raise ValueError("mode bands differ")
        return FourierPhaseFunction(self.modes, self.values - other.values)

    def __add__(self, other):
        if other.modes != self.modes:
            raise ValueError("mode bands differ")
        return FourierPhaseFunction(self.modes, self.values + other.values)

    def __mul__(self, scalar):
        return FourierPhaseFunction(self.modes, self.values * scalar, self.source_grid)

    __rmul__ = __mul__


def symplectic_fourier(f):
    """Forward transform of a PhaseFunction onto its full mode band."""
    g = f.grid
    fwd_x, fwd_v, _, _ = _axis_matrices(g.n, g.period, g.velocity_cutoff)
    vals = f.values.astype(complex)
    j = g.particles
    for ax in range(j):
        vals = _apply_axis(vals, fwd_x, ax)
    for ax in range(j, 2 * j):
        vals = _apply_axis(vals, fwd_v, ax)
    return FourierPhaseFunction(mode_grid_of(g), vals, source_grid=g)


def inverse_symplectic_fourier(F, grid=None):
    """Inverse transform back to grid values (real part; the imaginary
    residue of a conjugate-symmetric input is discarded after a check)."""
    g = grid if grid is not None else F.source_grid
    if g is None:
        raise ValueError("no target grid recorded on this mode function")
    if F.modes != mode_grid_of(g):
        raise ResolutionError("mode band does not match the grid's full band")
    _, _, inv_x, inv_v = _axis_matrices(g.n, g.period, g.velocity_cutoff)
    vals = F.values
    j = g.particles
    for ax in range(j):
        vals = _apply_axis(vals, inv_x, ax)
    for ax in range(j, 2 * j):
        vals = _apply_axis(vals, inv_v, ax)
    scale = float(np.abs(vals).max()) or 1.0
    if np.abs(vals.imag).max() > 1e-9 * scale:
        raise ValueError("inverse transform produced a non-real function")
    return PhaseFunction(g, vals.real)


def sample_modes(f, modes):
    """Evaluate the transform of a grid function on an arbitrary band.

    Position modes must be integers of the grid's resolved band;
    velocity modes may be any reals (the grid function is compactly
    supported in v, so its eta-transform is entire and the quadrature
    stays exact for band-limited data).
    """
    g = f.grid
    j = g.particles
    if j != modes.particles:
        raise ValueError("particle count mismatch")
    xi_int = np.rint(modes.xi * g.period / (2 * np.pi))
    if np.abs(xi_int * (2 * np.pi / g.period) - modes.xi).max() > 1e-9:
        raise ResolutionError("position modes must be integer multiples of 2*pi/period")
    if np.abs(xi_int).max() > g.n // 2 - 1:
        raise ResolutionError("position mode outside the resolved band")
    fwd_x = np.exp(1j * np.outer(modes.xi, g.x)) * g.dx
    fwd_v = np.exp(-1j * np.outer(modes.eta, g.v)) * g.dv
    vals = f.values.astype(complex)
    for ax in range(j):
        vals = _apply_axis(vals, fwd_x, ax)
    for ax in range(j, 2 * j):
        vals = _apply_axis(vals, fwd_v, ax)
    return FourierPhaseFunction(modes, vals, source_grid=g)
