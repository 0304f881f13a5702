"""Even trigonometric pair potentials on the torus.

A potential is a finite cosine series Phi(x) = sum_k c_k cos(k x) with
positive integer wavenumbers k.  Evenness and realness hold by
construction, and the derived constants used in the rate estimates
(sup norm, Lipschitz constant of the force, Fourier weights) are the
computable upper bounds sum |c_k|, sum k^2 |c_k| and |c_k|/2 per signed
mode.
"""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class TrigPotential:
    """Phi(x) = sum_k modes[k] * cos(k*x), k a positive integer."""

    modes: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for k, c in self.modes.items():
            k = int(k)
            if k <= 0:
                raise ValueError(f"mode numbers must be positive integers, got {k}")
            if c != 0.0:
                clean[k] = float(c)
        object.__setattr__(self, "modes", clean)

    @property
    def sup_norm(self):
        """Upper bound for sup |Phi|."""
        return sum(abs(c) for c in self.modes.values())

    @property
    def grad_sup_norm(self):
        """Upper bound for sup |Phi'|."""
        return sum(k * abs(c) for k, c in self.modes.items())

    @property
    def grad_lipschitz(self):
        """Upper bound for Lip(Phi') = sup |Phi''|."""
        return sum(k * k * abs(c) for k, c in self.modes.items())

    def fourier_modes(self):
        """Signed mode list [(h, coeff), ...] with coeff = c_|h|/2.

        These are the torus Fourier coefficients of Phi, the finite-sum
        replacement for the potential's continuous Fourier transform in
        all hierarchy operators.
        """
        out = []
        for k, c in sorted(self.modes.items()):
            out.append((-k, c / 2.0))
            out.append((k, c / 2.0))
        return out

    @property
    def is_zero(self):
        return not self.modes

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for k, c in self.modes.items():
            out += c * np.cos(k * x)
        return out

    def gradient(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for k, c in self.modes.items():
            out -= c * k * np.sin(k * x)
        return out

    def pair_energy(self, positions, coupling_n):
        """V(x_1..x_N) = (1/(2*coupling_n)) * sum_{k,l} Phi(x_k - x_l).

        The diagonal k = l self-interaction Phi(0)*N/(2*coupling_n) is
        kept; it is a constant and cancels from every observable.
        """
        positions = np.asarray(positions, dtype=float)
        n = positions.shape[-1]
        diff = positions[..., :, None] - positions[..., None, :]
        return self(diff).sum(axis=(-2, -1)) / (2.0 * coupling_n)
