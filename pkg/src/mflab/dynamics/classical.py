"""Classical many-body and kinetic mean-field evolution on the torus.

evolve_classical_nbody integrates replicas of the N-particle Newton
dynamics with 1/N coupling by velocity-Verlet (symplectic, exact
momentum conservation for even potentials).  evolve_vlasov runs the
self-consistent particle method, estimating the mean-field force
spectrally from the empirical density each step.  vlasov_grid_solve is
an independent deterministic semi-Lagrangian solver used as the
reference for the particle method and for the coupled-characteristics
error estimator of the convergence studies.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import map_coordinates

from .. import _kernels
from ..errors import SamplingError, StepSizeError
from ..phase_space.grids import TWO_PI
from .quantum import _steps_for


@dataclass
class ClassicalEnsemble:
    """Replicas of N-particle phase points, equal weights."""

    positions: np.ndarray  # (replicas, N)
    velocities: np.ndarray
    period: float = TWO_PI

    def __post_init__(self):
        self.positions = np.atleast_2d(np.asarray(self.positions, dtype=float))
        self.velocities = np.atleast_2d(np.asarray(self.velocities, dtype=float))
        if self.positions.shape != self.velocities.shape:
            raise ValueError("positions/velocities shape mismatch")
        if not (np.isfinite(self.positions).all() and np.isfinite(self.velocities).all()):
            raise ValueError("phase points must be finite")

    @property
    def replicas(self):
        return self.positions.shape[0]

    @property
    def n_particles(self):
        return self.positions.shape[1]

    def copy(self):
        return ClassicalEnsemble(self.positions.copy(), self.velocities.copy(), self.period)


def sample_gaussian_ensemble(rng, replicas, N, q0, p0, sigma_x, sigma_v, period=TWO_PI):
    """i.i.d. product samples of the wrapped-Gaussian benchmark density."""
    x = rng.normal(q0, sigma_x, size=(replicas, N)) % period
    v = rng.normal(p0, sigma_v, size=(replicas, N))
    return ClassicalEnsemble(x, v, period)


def _mode_arrays(phi):
    ks = sorted(phi.modes)
    return (
        np.asarray([float(k) for k in ks]),
        np.asarray([phi.modes[k] for k in ks]),
    )


def evolve_classical_nbody(ens, phi, dt, t_final):
    """Velocity-Verlet under the mean-field pair force, batched over replicas."""
    nsteps, dt = _steps_for(dt, t_final)
    if not phi.is_zero and dt * phi.grad_sup_norm > 0.5:
        raise StepSizeError("dt too large for the force scale")
    out = ens.copy()
    if nsteps == 0:
        return out
    mode_k, mode_c = _mode_arrays(phi)
    _kernels.verlet_batch(out.positions, out.velocities, mode_k, mode_c, dt, nsteps, ens.period)
    return out


def evolve_vlasov(ens, phi, dt, t_final, min_samples=10_000, allow_undersampled=False):
    """Self-consistent particle method: all points of the ensemble form
    one sample cloud of the kinetic density."""
    cloud = ens.positions.size
    if cloud < min_samples and not allow_undersampled:
        raise SamplingError(
            f"{cloud} samples underresolve the self-consistent force; "
            f"need >= {min_samples} (or pass allow_undersampled=True)"
        )
    flat = ClassicalEnsemble(
        ens.positions.reshape(1, -1), ens.velocities.reshape(1, -1), ens.period
    )
    moved = evolve_classical_nbody(flat, phi, dt, t_final)
    return ClassicalEnsemble(
        moved.positions.reshape(ens.positions.shape),
        moved.velocities.reshape(ens.velocities.shape),
        ens.period,
    )


def phase_mode_estimates(ens, modes_xi, modes_eta):
    """Monte Carlo estimate of the one-particle symplectic Fourier modes
    E[exp(i(xi x - eta v))], averaged over particles and replicas.

    Returns (estimates, stderr) per mode; the standard error comes from
    the replica-level spread, which respects intra-replica correlation.
    """
    xi = np.asarray(modes_xi, dtype=float)
    eta = np.asarray(modes_eta, dtype=float)
    per_replica = _kernels.phase_mode_sums(ens.positions, ens.velocities, xi, eta)
    per_replica = np.asarray(per_replica)
    est = per_replica.mean(axis=0)
    R = per_replica.shape[0]
    if R > 1:
        var = np.abs(per_replica - est[None, :]) ** 2
        stderr = np.sqrt(var.sum(axis=0) / (R - 1) / R)
    else:
        stderr = np.full(est.shape, np.nan)
    return est, stderr


# --------------------------------------------------------------- reference


class VlasovGridSolution:
    """Semi-Lagrangian solve of the kinetic mean-field equation.

    Stores the phase density on a (x, v) grid plus the force-mode
    history (cosine and sine moments of the spatial density per step)
    so characteristics can be integrated in the same field.
    """

    def __init__(self, f, x, v, phi, times, cos_hist, sin_hist):
        self.f = f
        self.x = x
        self.v = v
        self.phi = phi
        self.times = times
        self.cos_hist = cos_hist
        self.sin_hist = sin_hist

    def density_modes(self, xi_list, eta_list):
        dx = self.x[1] - self.x[0]
        dv = self.v[1] - self.v[0]
        out = np.empty(len(xi_list), dtype=complex)
        for q, (xi, eta) in enumerate(zip(xi_list, eta_list)):
            ph = np.exp(1j * (xi * self.x[:, None] - eta * self.v[None, :]))
            out[q] = (self.f * ph).sum() * dx * dv
        return out


def vlasov_grid_solve(f0_values, x, v, phi, dt, t_final):
    """Strang-split semi-Lagrangian integration of the mean-field
    kinetic equation; exact spectral advection in x, cubic-spline
    advection in v, force recomputed from the spatial density."""
    f = np.asarray(f0_values, dtype=float).copy()
    nx, nv = f.shape
    dx = x[1] - x[0]
    period = dx * nx
    dv = v[1] - v[0]
    nsteps, dt = _steps_for(dt, t_final)
    kx = np.fft.fftfreq(nx, d=1.0 / nx) * (TWO_PI / period)
    mode_k, mode_c = _mode_arrays(phi)
    cos_hist = np.zeros((nsteps + 1, len(mode_k)))
    sin_hist = np.zeros((nsteps + 1, len(mode_k)))

    def half_x_advect(f):
        fk = np.fft.fft(f, axis=0)
        shift = np.exp(-1j * kx[:, None] * v[None, :] * dt / 2.0)
        return np.real(np.fft.ifft(fk * shift, axis=0))

    def field(f, row):
        rho = f.sum(axis=1) * dv
        cs = np.array([(rho * np.cos(k * x)).sum() * dx for k in mode_k])
        ss = np.array([(rho * np.sin(k * x)).sum() * dx for k in mode_k])
        cos_hist[row] = cs
        sin_hist[row] = ss
        force = np.zeros(nx)
        for kk, cc, c1, s1 in zip(mode_k, mode_c, cs, ss):
            force += cc * kk * (np.sin(kk * x) * c1 - np.cos(kk * x) * s1)
        return force

    for step in range(nsteps):
        f = half_x_advect(f)
        force = field(f, step)
        # v-advection: f(x, v) <- f(x, v - F(x) dt), cubic interpolation
        idx = (v[None, :] - force[:, None] * dt - v[0]) / dv
        rows = np.broadcast_to(np.arange(nx)[:, None], idx.shape)
        f = map_coordinates(f, [rows, idx], order=3, mode="nearest")
        f = half_x_advect(f)
    field(f, nsteps)
    return VlasovGridSolution(f, x, v, phi, dt * np.arange(nsteps + 1), cos_hist, sin_hist)


def characteristics_in_field(ens, sol, dt_forced=None):
    """Integrate ensemble points along the grid solution's mean-field
    force history (Verlet with the per-step field), for coupled
    comparisons against the interacting N-body flow."""
    times = sol.times
    nsteps = len(times) - 1
    dt = times[1] - times[0] if nsteps else 0.0
    out = ens.copy()
    if nsteps == 0:
        return out
    mode_k, _ = _mode_arrays(sol.phi)
    mode_c = np.asarray([sol.phi.modes[int(k)] for k in mode_k])
    ccoef = sol.cos_hist * (mode_c * mode_k)[None, :]
    scoef = sol.sin_hist * (mode_c * mode_k)[None, :]
    _kernels.external_field_steps(
        out.positions, out.velocities, mode_k, ccoef, scoef, dt, ens.period
    )
    return out
