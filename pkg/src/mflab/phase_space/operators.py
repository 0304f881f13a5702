"""Density operators on the position torus and their phase-space transforms.

A j-particle operator is stored through its integral kernel K on the
position grid, axes ordered (x_1..x_j, y_1..y_j).  Writing the kernel in
Fourier modes K(x,y) = sum_{a,b} Khat[a,b] e^{i(a.x - b.y)}, the
symplectic Fourier transform of its Wigner function is the finite sum

    ft_W(xi, eta) = (2*pi)^j sum_b Khat[b-xi, b] prod_i e^{-i*hbar*eta_i*(b_i - xi_i/2)}

which is exact for band-limited kernels and evaluable at any real eta.
The Wigner function itself lives on the doubled grid (2n points per
axis) with velocity spacing hbar/2 and window n*hbar/2; on that grid the
trace identity and the transform round trip hold to machine precision.

Velocity on the torus is quantized, so ft_W is almost periodic in eta
with period 2*pi/hbar; norm computations therefore always restrict to a
finite resolved band (see norms.py).
"""

import math
from dataclasses import dataclass

import numpy as np

from ..errors import CapacityError, ResolutionError
from .grids import TWO_PI, PhaseGrid, PhaseFunction
from .spectral import (
    FourierPhaseFunction,
    ModeGrid,
    mode_grid_of,
    symplectic_fourier,
)

_KMODE_CACHE = {}


@dataclass(frozen=True)
class CoherentPoint:
    q: float
    p: float
    hbar: float

    def __post_init__(self):
        if not (np.isfinite(self.q) and np.isfinite(self.p)):
            raise ValueError("coherent point coordinates must be finite")
        if self.hbar <= 0:
            raise ValueError("hbar must be positive")


def position_grid(n, period=TWO_PI):
    return (period / n) * np.arange(n)


def coherent_wavefunction(n, q, p, hbar, period=TWO_PI, images=4):
    """Periodized Gaussian wave packet, normalized on the grid."""
    x = position_grid(n, period)
    psi = np.zeros(n, dtype=complex)
    for m in range(-images, images + 1):
        u = x - q + m * period
        psi += np.exp(-(u**2) / (2.0 * hbar)) * np.exp(1j * p * u / hbar)
    dx = period / n
    psi /= math.sqrt(float((np.abs(psi) ** 2).sum() * dx))
    return psi


class DensityOperator:
    """Dense kernel of a (candidate) trace-class operator, j <= 2."""

    def __init__(self, kernel, hbar, period=TWO_PI):
        kernel = np.asarray(kernel, dtype=complex)
        if kernel.ndim % 2 != 0:
            raise ValueError("kernel must have 2j axes")
        j = kernel.ndim // 2
        if j > 2:
            raise CapacityError("dense kernels are limited to j <= 2 particles")
        n = kernel.shape[0]
        if any(s != n for s in kernel.shape):
            raise ValueError("kernel axes must share one grid size")
        if hbar <= 0:
            raise ValueError("hbar must be positive")
        self.kernel = kernel
        self.hbar = float(hbar)
        self.period = float(period)
        self.particles = j
        self.n = n

    @property
    def dx(self):
        return self.period / self.n

    def trace(self):
        j, n = self.particles, self.n
        idx = np.arange(n)
        if j == 1:
            return complex(self.kernel[idx, idx].sum() * self.dx)
        return complex(self.kernel[idx[:, None], idx[None, :], idx[:, None], idx[None, :]].sum() * self.dx**2)

    def hermiticity_defect(self):
        j = self.particles
        swap = tuple(range(j, 2 * j)) + tuple(range(j))
        return float(np.abs(self.kernel - self.kernel.transpose(swap).conj()).max())

    def validate(self, trace_tol=1e-10, herm_tol=1e-12):
        scale = max(1.0, float(np.abs(self.kernel).max()))
        if self.hermiticity_defect() > herm_tol * scale:
            raise ValueError("kernel is not Hermitian within tolerance")
        if abs(self.trace() - 1.0) > trace_tol:
            raise ValueError(f"trace {self.trace()} != 1 within tolerance")
        return self

    def as_matrix(self):
        """Operator matrix acting on grid wavefunctions (includes dx^j)."""
        dim = self.n**self.particles
        return self.kernel.reshape(dim, dim) * self.dx**self.particles

    def copy(self):
        return DensityOperator(self.kernel.copy(), self.hbar, self.period)

    @classmethod
    def from_wavefunction(cls, psi, hbar, period=TWO_PI):
        psi = np.asarray(psi, dtype=complex)
        j = psi.ndim
        kernel = np.multiply.outer(psi, psi.conj())
        return cls(kernel, hbar, period)

    def kernel_modes(self):
        """Khat with axes (a_1..a_j, b_1..b_j), ascending mode order."""
        n = self.n
        key = (n, self.period)
        if key not in _KMODE_CACHE:
            x = position_grid(n, self.period)
            modes = np.arange(n) - n // 2
            dx = self.period / n
            _KMODE_CACHE[key] = np.exp(-1j * np.outer(modes, x)) * dx / self.period
        P = _KMODE_CACHE[key]
        j = self.particles
        vals = self.kernel
        for ax in range(j):
            vals = np.moveaxis(np.tensordot(P, vals, axes=([1], [ax])), 0, ax)
        for ax in range(j, 2 * j):
            vals = np.moveaxis(np.tensordot(P.conj(), vals, axes=([1], [ax])), 0, ax)
        return vals


def coherent_projector(n, point, period=TWO_PI):
    psi = coherent_wavefunction(n, point.q, point.p, point.hbar, period)
    return DensityOperator.from_wavefunction(psi, point.hbar, period)


def wigner_grid(particles, n, hbar, period=TWO_PI):
    """Phase grid on which an n-point kernel's Wigner function is exact:
    doubled position resolution, velocity spacing hbar/2."""
    return PhaseGrid(particles, 2 * n, period, velocity_cutoff=n * hbar / 2.0)


def kernel_grid_for(grid, hbar):
    """Inverse of wigner_grid; raises if the grid is not commensurate."""
    n = grid.points_per_axis // 2
    if grid.points_per_axis != 2 * n:
        raise ResolutionError("phase grid is not a doubled operator grid")
    want = n * hbar / 2.0
    if abs(grid.velocity_cutoff - want) > 1e-9 * max(1.0, want):
        raise ResolutionError(
            f"velocity window {grid.velocity_cutoff} incompatible with hbar={hbar}: "
            f"operator transforms need V = n*hbar/2 = {want}"
        )
    return n


def _diag_band(n, xi):
    """Valid b-mode range for the xi-th kernel diagonal."""
    lo = max(-n // 2, -n // 2 + xi)
    hi = min(n // 2 - 1, n // 2 - 1 + xi)
    return np.arange(lo, hi + 1)


def fourier_wigner(D, modes):
    """Symplectic Fourier transform of the Wigner function of D, sampled
    on an arbitrary mode band (integer xi, any real eta)."""
    if modes.particles != D.particles:
        raise ValueError("particle count mismatch")
    n, hbar, j = D.n, D.hbar, D.particles
    xi_int = np.rint(modes.xi).astype(int)
    if np.abs(modes.xi - xi_int).max() > 1e-9:
        raise ResolutionError("position modes must be integers on the 2*pi torus")
    # |xi| > n-1 has no kernel diagonal: the transform of a band-limited
    # kernel vanishes there exactly, so those rows are zero.
    Khat = D.kernel_modes()
    eta = modes.eta
    if j == 1:
        out = np.zeros((len(xi_int), len(eta)), dtype=complex)
        for i, s in enumerate(xi_int):
            bs = _diag_band(n, s)
            if len(bs) == 0:
                continue
            diag = Khat[bs - s + n // 2, bs + n // 2]
            phases = np.exp(-1j * hbar * np.outer(eta, bs - s / 2.0))
            out[i] = TWO_PI * phases @ diag
        return FourierPhaseFunction(modes, out)
    if j == 2:
        ne = len(eta)
        out = np.zeros((len(xi_int), len(xi_int), ne, ne), dtype=complex)
        for i1, s1 in enumerate(xi_int):
            b1 = _diag_band(n, s1)
            if len(b1) == 0:
                continue
            ph1 = np.exp(-1j * hbar * np.outer(eta, b1 - s1 / 2.0))
            for i2, s2 in enumerate(xi_int):
                b2 = _diag_band(n, s2)
                if len(b2) == 0:
                    continue
                diag = Khat[
                    (b1 - s1)[:, None] + n // 2,
                    (b2 - s2)[None, :] + n // 2,
                    b1[:, None] + n // 2,
                    b2[None, :] + n // 2,
                ]
                ph2 = np.exp(-1j * hbar * np.outer(eta, b2 - s2 / 2.0))
                out[i1, i2] = TWO_PI**2 * np.einsum("qa,ab,rb->qr", ph1, diag, ph2)
        return FourierPhaseFunction(modes, out)
    raise CapacityError("fourier_wigner supports j <= 2")


def wigner_transform(D):
    """Wigner function of D on its natural (doubled, commensurate) grid."""
    from .spectral import inverse_symplectic_fourier

    g = wigner_grid(D.particles, D.n, D.hbar, D.period)
    F = fourier_wigner(D, mode_grid_of(g))
    F.source_grid = g
    return inverse_symplectic_fourier(F, g)


def inverse_wigner(W, hbar):
    """Reconstruct the dense kernel whose Wigner function is W.

    Exact on Wigner images; for a general phase function it keeps the
    part representable by an n-point kernel (n = grid points / 2).
    """
    n = kernel_grid_for(W.grid, hbar)
    j = W.grid.particles
    F = symplectic_fourier(W)
    return _kernel_from_lattice(F.values, n, j, hbar, W.grid)


def _kernel_from_lattice(fvals, n, j, hbar, grid):
    """Invert ft_W lattice samples to kernel modes, then to the kernel.

    For fixed xi the eta-dependence is a trigonometric sum with period
    2*pi/hbar, while the doubled lattice spans two such periods.  The
    inversion therefore restricts to the centered single period (n
    points): on true Wigner images both periods carry identical data, so
    the round trip is exact, and on general symbols this realizes the
    alias sum that the coherent-state average produces.
    """
    n2 = grid.points_per_axis  # = 2n
    # symmetric trapezoid over one eta-period: n+1 points, half-weight ends
    lo = n2 // 2 - n // 2
    sel = slice(lo, lo + n + 1)
    eta = grid.eta[sel]
    wts = np.ones(n + 1)
    wts[0] = wts[-1] = 0.5
    xi = np.rint(grid.xi).astype(int)
    if j == 1:
        fvals = fvals[:, sel] * wts
        Khat = np.zeros((n, n), dtype=complex)
        for i, s in enumerate(xi):
            if abs(s) > n - 1:
                continue
            bs = _diag_band(n, s)
            if len(bs) == 0:
                continue
            rec = np.exp(1j * hbar * np.outer(bs - s / 2.0, eta))
            Khat[bs - s + n // 2, bs + n // 2] = (rec @ fvals[i]) / (TWO_PI * n)
    elif j == 2:
        fvals = fvals[:, :, sel, :][:, :, :, sel] * np.outer(wts, wts)
        Khat = _assemble_khat2(fvals, n, hbar, xi, eta)
    else:
        raise CapacityError("inverse_wigner supports j <= 2")
    return _kernel_from_modes(Khat, n, j, hbar, grid.period)


def _assemble_khat2(fvals, n, hbar, xi, eta):
    Khat = np.zeros((n, n, n, n), dtype=complex)
    for i1, s1 in enumerate(xi):
        if abs(s1) > n - 1:
            continue
        b1 = _diag_band(n, s1)
        if len(b1) == 0:
            continue
        r1 = np.exp(1j * hbar * np.outer(b1 - s1 / 2.0, eta))
        for i2, s2 in enumerate(xi):
            if abs(s2) > n - 1:
                continue
            b2 = _diag_band(n, s2)
            if len(b2) == 0:
                continue
            r2 = np.exp(1j * hbar * np.outer(b2 - s2 / 2.0, eta))
            block = np.einsum("aq,qr,br->ab", r1, fvals[i1, i2], r2) / (TWO_PI * n) ** 2
            for ia, a in enumerate(b1):
                Khat[a - s1 + n // 2, b2 - s2 + n // 2, a + n // 2, b2 + n // 2] = block[ia]
    return Khat


def wigner_pairing(W1, W2, hbar):
    """Discrete pairing pi*hbar * sum W1*W2 dx dv; equals trace(F1 F2).

    On the doubled velocity lattice each sheet period is covered twice,
    which halves the continuum constant (2*pi*hbar)^d.
    """
    if W1.grid != W2.grid:
        raise ValueError("grids differ")
    return float(np.pi * hbar * (W1.values * W2.values).sum() * W1.grid.cell_volume)


def _kernel_from_modes(Khat, n, j, hbar, period):
    x = position_grid(n, period)
    modes = np.arange(n) - n // 2
    Ex = np.exp(1j * np.outer(x, modes))
    vals = Khat
    for ax in range(j):
        vals = np.moveaxis(np.tensordot(Ex, vals, axes=([1], [ax])), 0, ax)
    for ax in range(j, 2 * j):
        vals = np.moveaxis(np.tensordot(Ex.conj(), vals, axes=([1], [ax])), 0, ax)
    return DensityOperator(vals, hbar, period)


def husimi(D):
    """Gaussian-smoothed Wigner function e^{hbar*Lap/4} W, on the Wigner grid.

    The eta synthesis runs over three almost-periods so the Gaussian
    multiplier has fully decayed at the summation edge; the result then
    matches the continuum mollification to machine precision and is
    nonnegative for nonnegative operators.
    """
    g = wigner_grid(D.particles, D.n, D.hbar, D.period)
    n2 = g.points_per_axis
    span = g.deta * n2
    eta_ext = np.concatenate([g.eta - span, g.eta, g.eta + span])
    band = ModeGrid(D.particles, g.xi, eta_ext)
    F = fourier_wigner(D, band)
    vals = F.values * _gauss_multiplier(band, D.hbar / 4.0)
    # inverse transform with the extended eta set
    j = D.particles
    inv_x = np.exp(-1j * np.outer(g.x, g.xi)) / g.period
    inv_v = np.exp(1j * np.outer(g.v, eta_ext)) * (g.deta / TWO_PI)
    for ax in range(j):
        vals = np.moveaxis(np.tensordot(inv_x, vals, axes=([1], [ax])), 0, ax)
    for ax in range(j, 2 * j):
        vals = np.moveaxis(np.tensordot(inv_v, vals, axes=([1], [ax])), 0, ax)
    scale = float(np.abs(vals).max()) or 1.0
    if np.abs(vals.imag).max() > 1e-9 * scale:
        raise ValueError("husimi synthesis produced a non-real function")
    return PhaseFunction(g, vals.real)


def _gauss_multiplier(band, s):
    """exp(-s * sum_i (xi_i^2 + eta_i^2)) over the band."""
    j = band.particles
    total = np.zeros(band.shape)
    for i in range(j):
        sh = [1] * (2 * j)
        sh[i] = len(band.xi)
        total = total + (band.xi**2).reshape(sh)
        sh = [1] * (2 * j)
        sh[j + i] = len(band.eta)
        total = total + (band.eta**2).reshape(sh)
    return np.exp(-s * total)


def heat_semigroup(f, s):
    """e^{s*Lap} f for a grid phase function, via the spectral multiplier."""
    from .spectral import inverse_symplectic_fourier

    F = symplectic_fourier(f)
    F.values *= _gauss_multiplier(F.modes, s)
    return inverse_symplectic_fourier(F, f.grid)


def toeplitz_quantize(mu, hbar, kernel_points=None, period=TWO_PI):
    """Quantize a nonnegative phase-space measure to a density operator.

    Grid symbols (PhaseFunction on a commensurate doubled grid) are
    quantized spectrally: the operator is the one whose Wigner function
    is the quarter-heat mollification of the symbol.  Discrete measures
    become the same convex combination of coherent-state projectors that
    defines the quantization pointwise.  Either way the trace equals the
    symbol's total mass.
    """
    if hasattr(mu, "support") and hasattr(mu, "weights"):
        if kernel_points is None:
            raise ValueError("kernel_points required when quantizing a discrete measure")
        if np.any(np.asarray(mu.weights) < 0):
            raise ValueError("negative symbol cannot be quantized")
        kern = np.zeros((kernel_points, kernel_points), dtype=complex)
        for (q, p), w in zip(mu.support, mu.weights):
            psi = coherent_wavefunction(kernel_points, q, p, hbar, period)
            kern += w * np.multiply.outer(psi, psi.conj())
        return DensityOperator(kern, hbar, period)
    if not isinstance(mu, PhaseFunction):
        raise TypeError("symbol must be a PhaseFunction or a discrete measure")
    scale = float(np.abs(mu.values).max()) or 1.0
    if mu.values.min() < -1e-12 * scale:
        raise ValueError("negative symbol cannot be quantized")
    n = kernel_grid_for(mu.grid, hbar)
    F = symplectic_fourier(mu)
    vals = F.values * _gauss_multiplier(F.modes, hbar / 4.0)
    return _kernel_from_lattice(vals, n, mu.grid.particles, hbar, mu.grid)


def partial_trace(D, k):
    """Trace out particles k+1..j of a dense kernel."""
    j = D.particles
    if k > j or k < 1:
        raise ValueError(f"partial trace onto k={k} undefined for j={j}")
    kern = D.kernel
    for _ in range(j - k):
        jj = kern.ndim // 2
        kern = np.diagonal(kern, axis1=jj - 1, axis2=2 * jj - 1).sum(axis=-1) * D.dx
    return DensityOperator(kern, D.hbar, D.period)


def trace_norm(D, herm_tol=1e-10):
    """Sum of absolute eigenvalues of the (cell-volume weighted) kernel."""
    scale = max(1.0, float(np.abs(D.kernel).max()))
    if D.hermiticity_defect() > herm_tol * scale:
        raise ValueError("trace_norm requires a Hermitian kernel")
    lam = np.linalg.eigvalsh(D.as_matrix())
    return float(np.abs(lam).sum())


def trace_product(D1, D2):
    """trace(D1 D2) for dense kernels on the same grid."""
    m1, m2 = D1.as_matrix(), D2.as_matrix()
    return complex(np.einsum("ab,ba->", m1, m2))
