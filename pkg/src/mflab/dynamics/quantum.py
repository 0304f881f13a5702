"""Quantum N-body evolution by split-step spectral integration.

States are ensembles of product-seeded wavefunctions on the position
grid^N; the von Neumann dynamics of a mixed state is realized by
evolving each pure member under the mean-field-scaled Hamiltonian

    H_N = -(hbar^2/2) Lap + (1/2N) sum_{k,l} Phi(x_k - x_l)

(the diagonal k = l term contributes the constant Phi(0)*N/(2N), a
global phase that cancels from every observable).  Toeplitz initial
data with atomic symbols expands into an exact finite mixture of
coherent product states; permutation symmetry compresses the mixture to
one representative per symbol multiset, provided reductions average
over particle coordinates, which ``reduced_state`` does for ensembles
built that way.
"""

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import fft as sfft

from ..errors import CapacityError, StepSizeError
from ..phase_space.grids import TWO_PI
from ..phase_space.operators import DensityOperator, coherent_wavefunction, fourier_wigner

MAX_PARTICLES = 4


@dataclass
class QuantumEnsemble:
    """Weighted pure states on the N-particle position grid.

    ``members`` holds (weight, factors-or-array): a tuple of N single
    particle vectors denotes their (unentangled) tensor product and is
    materialized lazily; evolved members are stored as full arrays.
    ``symmetrized`` marks mixtures that represent a permutation
    symmetric state through one representative per member, in which
    case reductions average over particle coordinates.
    """

    members: list
    n_particles: int
    points_per_axis: int
    hbar: float
    period: float = TWO_PI
    symmetrized: bool = False

    def __post_init__(self):
        if self.n_particles > MAX_PARTICLES:
            raise CapacityError(f"quantum N limited to N <= {MAX_PARTICLES}")
        total = sum(w for w, _ in self.members)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"member weights sum to {total}, not 1")

    @property
    def dx(self):
        return self.period / self.points_per_axis

    def iter_wavefunctions(self):
        for w, psi in self.members:
            yield w, self.materialize(psi)

    def materialize(self, psi):
        if isinstance(psi, np.ndarray) and psi.ndim == self.n_particles:
            return psi
        out = psi[0]
        for f in psi[1:]:
            out = np.multiply.outer(out, f)
        return out

    def member_norm_defect(self):
        worst = 0.0
        for _, psi in self.iter_wavefunctions():
            nrm = math.sqrt(float((np.abs(psi) ** 2).sum()) * self.dx**self.n_particles)
            worst = max(worst, abs(nrm - 1.0))
        return worst


def toeplitz_product_ensemble(atoms, weights, N, n, hbar, period=TWO_PI):
    """Exact ensemble for the N-fold tensor power of an atomic-symbol
    Toeplitz operator, compressed over symbol multisets."""
    weights = np.asarray(weights, dtype=float)
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-12:
        raise ValueError("atomic symbol weights must be a probability vector")
    factors = [coherent_wavefunction(n, q, p, hbar, period) for q, p in atoms]
    members = []
    for combo in itertools.combinations_with_replacement(range(len(atoms)), N):
        mult = math.factorial(N)
        for g in set(combo):
            mult //= math.factorial(combo.count(g))
        w = mult * float(np.prod(weights[list(combo)]))
        members.append((w, tuple(factors[k] for k in combo)))
    return QuantumEnsemble(members, N, n, hbar, period, symmetrized=True)


def _kinetic_modes(n, N, period):
    k1 = np.fft.fftfreq(n, d=1.0 / n) * (TWO_PI / period)
    total = np.zeros((n,) * N)
    for ax in range(N):
        sh = [1] * N
        sh[ax] = n
        total = total + (k1**2).reshape(sh)
    return total


def _pair_potential_grid(phi, n, N, period):
    x = (period / n) * np.arange(n)
    total = np.zeros((n,) * N)
    for a in range(N):
        for b in range(N):
            sh_a = [1] * N
            sh_a[a] = n
            sh_b = [1] * N
            sh_b[b] = n
            total = total + phi(x.reshape(sh_a) - x.reshape(sh_b))
    return total / (2.0 * N)


def check_step_size(dt, n, hbar, phi, period=TWO_PI):
    """Phase-resolution rule: both split phases must stay below pi/4."""
    kmax = (n // 2) * (TWO_PI / period)
    if hbar * kmax**2 * dt / 2.0 >= math.pi / 4.0:
        raise StepSizeError(
            f"kinetic phase {hbar * kmax**2 * dt / 2.0:.3f} >= pi/4; reduce dt"
        )
    if phi is not None and not phi.is_zero:
        if phi.sup_norm * dt / hbar >= math.pi / 4.0:
            raise StepSizeError("potential phase >= pi/4; reduce dt")


class NBodyPropagator:
    """Strang-split spectral stepper for one wavefunction."""

    def __init__(self, phi, N, n, hbar, dt, period=TWO_PI):
        check_step_size(dt, n, hbar, phi, period)
        self.dt = dt
        kin = _kinetic_modes(n, N, period)
        self.kin_phase = np.exp(-1j * hbar * kin * dt / 2.0)
        if phi is None or phi.is_zero:
            self.half_v = None
        else:
            V = _pair_potential_grid(phi, n, N, period)
            self.half_v = np.exp(-1j * V * dt / (2.0 * hbar))

    def step(self, psi, nsteps=1):
        for _ in range(nsteps):
            if self.half_v is not None:
                psi = psi * self.half_v
            psi = sfft.ifftn(self.kin_phase * sfft.fftn(psi))
            if self.half_v is not None:
                psi = psi * self.half_v
        return psi


def evolve_nbody_quantum(ens, phi, dt, t_final):
    """Evolve every member to t_final; returns a materialized ensemble."""
    nsteps, dt = _steps_for(dt, t_final)
    prop = NBodyPropagator(phi, ens.n_particles, ens.points_per_axis, ens.hbar, dt, ens.period)
    out = []
    for w, psi in ens.iter_wavefunctions():
        out.append((w, prop.step(psi.astype(complex), nsteps)))
    return QuantumEnsemble(
        out, ens.n_particles, ens.points_per_axis, ens.hbar, ens.period, ens.symmetrized
    )


def evolve_and_reduce(ens, phi, dt, times, j_list=(1,)):
    """Stream members through the propagator, accumulating reduced dense
    kernels at the requested times.  Memory stays at one member.

    Returns {t: {j: DensityOperator}} for the sorted time list.
    """
    times = sorted(times)
    if times and times[0] < 0:
        raise ValueError("times must be nonnegative")
    schedule = []
    prev = 0.0
    for t in times:
        nsteps, dt_used = _steps_for(dt, t - prev)
        schedule.append(nsteps)
        prev = t
    prop = NBodyPropagator(phi, ens.n_particles, ens.points_per_axis, ens.hbar, dt, ens.period)
    n = ens.points_per_axis
    acc = {t: {j: np.zeros((n,) * (2 * j), dtype=complex) for j in j_list} for t in times}
    for w, psi in ens.iter_wavefunctions():
        psi = psi.astype(complex)
        for t, nsteps in zip(times, schedule):
            psi = prop.step(psi, nsteps)
            for j in j_list:
                acc[t][j] += w * _reduced_kernel(psi, j, ens)
    return {
        t: {j: DensityOperator(acc[t][j], ens.hbar, ens.period) for j in j_list}
        for t in times
    }


def _steps_for(dt, span):
    if span <= 0:
        return 0, dt
    nsteps = max(1, int(round(span / dt)))
    return nsteps, span / nsteps


def _reduced_kernel(psi, j, ens):
    """Reduced kernel of |psi><psi| on j coordinates; coordinate-averaged
    when the ensemble is multiset-compressed."""
    N = ens.n_particles
    dx = ens.dx
    if ens.symmetrized:
        subsets = list(itertools.combinations(range(N), j))
    else:
        subsets = [tuple(range(j))]
    n = ens.points_per_axis
    out = np.zeros((n,) * (2 * j), dtype=complex)
    for coords in subsets:
        out += _single_reduction(psi, coords, N, dx)
    return out / len(subsets)


def _single_reduction(psi, coords, N, dx):
    rest = [ax for ax in range(N) if ax not in coords]
    perm = list(coords) + rest
    j = len(coords)
    n = psi.shape[0]
    mat = np.transpose(psi, perm).reshape(n**j, n ** (N - j))
    red = (mat @ mat.conj().T) * dx ** (N - j)
    return red.reshape((n,) * (2 * j))


def reduced_state(ens, j, coords=None):
    """Weighted average of member reductions; j <= 2 for dense kernels."""
    if j > 2:
        raise CapacityError("dense reduced kernels are limited to j <= 2")
    n = ens.points_per_axis
    out = np.zeros((n,) * (2 * j), dtype=complex)
    for w, psi in ens.iter_wavefunctions():
        if coords is not None:
            out += w * _single_reduction(psi, tuple(coords), ens.n_particles, ens.dx)
        else:
            out += w * _reduced_kernel(psi, j, ens)
    return DensityOperator(out, ens.hbar, ens.period)


def reduced_wigner(ens, j, modes):
    """Mode samples of the reduced Wigner function.

    Dense kernels carry j <= 2; higher marginals evaluate the transform
    directly from shifted wavefunction overlaps, at one FFT pair per
    velocity mode and member.
    """
    if j <= 2:
        return fourier_wigner(reduced_state(ens, j), modes)
    return _modes_from_overlaps(ens, j, modes)


def _modes_from_overlaps(ens, j, modes):
    n = ens.points_per_axis
    N = ens.n_particles
    dx = ens.dx
    x1 = dx * np.arange(n)
    kfreq = np.fft.fftfreq(n, d=1.0 / n)
    vals = np.zeros(modes.shape, dtype=complex)
    axes = tuple(range(j))
    if ens.symmetrized:
        subsets = list(itertools.combinations(range(N), j))
    else:
        subsets = [tuple(range(j))]
    for w, psi0 in ens.iter_wavefunctions():
        for coords in subsets:
            perm = list(coords) + [ax for ax in range(N) if ax not in coords]
            psi = np.transpose(psi0, perm)
            psihat = sfft.fftn(psi, axes=axes)
            for eidx in np.ndindex(*([len(modes.eta)] * j)):
                eta = np.array([modes.eta[i] for i in eidx])
                fwd = _shift_axes(psihat, kfreq, +ens.hbar * eta / 2.0, axes)
                bwd = _shift_axes(psihat, kfreq, -ens.hbar * eta / 2.0, axes)
                prod = sfft.ifftn(fwd, axes=axes) * sfft.ifftn(bwd, axes=axes).conj()
                rest = tuple(range(j, N))
                overlap = prod.sum(axis=rest) * dx ** (N - j)
                for xidx in np.ndindex(*([len(modes.xi)] * j)):
                    phase = np.ones((n,) * j, dtype=complex)
                    for ax, xi_i in enumerate(xidx):
                        sh = [1] * j
                        sh[ax] = n
                        phase = phase * np.exp(1j * modes.xi[xi_i] * x1).reshape(sh)
                    vals[xidx + eidx] += (
                        w / len(subsets) * (phase * overlap).sum() * dx**j
                    )
    from ..phase_space.spectral import FourierPhaseFunction

    return FourierPhaseFunction(modes, vals)


def _shift_axes(psihat, kfreq, shifts, axes):
    out = psihat
    n = len(kfreq)
    for ax, a in zip(axes, shifts):
        sh = [1] * psihat.ndim
        sh[ax] = n
        out = out * np.exp(-1j * kfreq * a).reshape(sh)
    return out
