"""Hierarchy sequences, expansion strings, and initial data.

Initial data enters the expansion only through pointwise evaluations of
the one-particle transform at (integer xi, real eta); levels factorize
as tensor powers, with entries above the particle number identically
zero.  Two implementations cover the artifact's needs: an analytic
mollified-Gaussian symbol (with the eta-alias images the quantized
torus velocity produces) and exact evaluation from a stored kernel.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ..phase_space.operators import DensityOperator, _diag_band, TWO_PI


@dataclass
class HierarchySequence:
    """Finite family {j: FourierPhaseFunction}, entry j on j particles."""

    entries: dict
    cutoff: int
    n_particles: int = None  # entries vanish above this level, if set

    def __post_init__(self):
        if self.cutoff < 1:
            raise ValueError("cutoff must be >= 1")
        for j, fj in self.entries.items():
            if fj is not None and fj.particles != j:
                raise ValueError(f"entry {j} carries {fj.particles} particles")

    def level(self, j):
        return self.entries.get(j)


@dataclass(frozen=True)
class DysonString:
    """Ordered interaction times with the expansion flavor.

    sigma, when given, fixes the operator choice per slot for the
    N-body flavor: 0 = in-group pair term, 1 = coupling term.  The
    times are ascending: times[0] acts first.
    """

    times: tuple
    flavor: str
    sigma: tuple = None

    def __post_init__(self):
        if self.flavor not in ("nbody", "hartree", "hhn"):
            raise ValueError(f"unknown flavor {self.flavor!r}")
        ts = tuple(float(t) for t in self.times)
        if any(b < a for a, b in zip(ts, ts[1:])):
            raise ValueError("times must be nondecreasing")
        object.__setattr__(self, "times", ts)
        if self.sigma is not None:
            sg = tuple(int(s) for s in self.sigma)
            if len(sg) != len(ts) or any(s not in (0, 1) for s in sg):
                raise ValueError("sigma must be a 0/1 string matching the times")
            object.__setattr__(self, "sigma", sg)

    @property
    def order(self):
        return len(self.times)


class GaussianToeplitzInitialData:
    """Quarter-heat mollified wrapped Gaussian: the one-particle Wigner
    transform of the Toeplitz quantization of a Gaussian symbol.

    eval(xi, eta) sums the alias images at eta + 2*pi*m/hbar with the
    relative phase (-1)^(m*xi); hbar = 0 or None gives the bare symbol
    (classical initial data).
    """

    def __init__(self, q0, p0, sigma_x, sigma_v=None, hbar=None, images=2):
        self.q0 = q0
        self.p0 = p0
        self.sx2 = sigma_x**2
        self.sv2 = (sigma_v if sigma_v is not None else sigma_x) ** 2
        self.hbar = hbar
        self.images = images

    def eval_1p(self, xi, eta):
        xi = np.asarray(xi, dtype=float)
        eta = np.asarray(eta, dtype=float)
        moll = self.hbar / 4.0 if self.hbar else 0.0
        wx = self.sx2 / 2.0 + moll
        wv = self.sv2 / 2.0 + moll
        base_x = np.exp(1j * self.q0 * xi - wx * xi**2)
        if not self.hbar:
            return base_x * np.exp(-1j * self.p0 * eta - wv * eta**2)
        out = np.zeros(np.broadcast(xi, eta).shape, dtype=complex)
        period = TWO_PI / self.hbar
        for m in range(-self.images, self.images + 1):
            em = eta + m * period
            out = out + (-1.0) ** (m * xi) * np.exp(-1j * self.p0 * em - wv * em**2)
        return base_x * out


class KernelInitialData:
    """Exact pointwise transform of a stored one-particle kernel."""

    def __init__(self, D):
        if D.particles != 1:
            raise ValueError("kernel initial data is built from 1-particle operators")
        self.hbar = D.hbar
        self.n = D.n
        self.khat = D.kernel_modes()
        self.modes = np.arange(self.n) - self.n // 2

    def eval_1p(self, xi, eta):
        xi = np.asarray(xi)
        eta = np.asarray(eta)
        shape = np.broadcast(xi, eta).shape
        xi_b = np.broadcast_to(xi, shape)
        eta_b = np.broadcast_to(eta, shape)
        out = np.zeros(shape, dtype=complex)
        for s in np.unique(np.rint(xi_b).astype(int)):
            if abs(s) > self.n - 1:
                continue
            mask = np.rint(xi_b).astype(int) == s
            bs = _diag_band(self.n, int(s))
            diag = self.khat[bs - s + self.n // 2, bs + self.n // 2]
            ph = np.exp(-1j * self.hbar * np.outer(eta_b[mask], bs - s / 2.0))
            out[mask] = TWO_PI * ph @ diag
        return out


def tensor_initial(data, level, xi_list, eta_list):
    """f^in_level evaluated at per-particle argument lists (factorized)."""
    total = 1.0
    for i in range(level):
        total = total * data.eval_1p(xi_list[i], eta_list[i])
    return total
