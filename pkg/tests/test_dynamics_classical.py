"""Classical N-body and Vlasov dynamics against independent oracles."""

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from mflab.errors import SamplingError
from mflab.potential import TrigPotential
from mflab.dynamics import (
    ClassicalEnsemble,
    characteristics_in_field,
    evolve_classical_nbody,
    evolve_vlasov,
    phase_mode_estimates,
    sample_gaussian_ensemble,
    vlasov_grid_solve,
)

PHI = TrigPotential({1: 1.0})
SMALL = TrigPotential({1: 0.05})


def test_free_motion_is_straight_lines(rng):
    ens = sample_gaussian_ensemble(rng, 50, 4, np.pi, 0.0, 0.5, 0.5)
    out = evolve_classical_nbody(ens, TrigPotential({}), 0.01, 0.7)
    want = (ens.positions + 0.7 * ens.velocities) % (2 * np.pi)
    assert np.abs(out.positions - want).max() < 1e-10
    assert np.abs(out.velocities - ens.velocities).max() == 0.0


def test_momentum_conserved_per_replica(rng):
    ens = sample_gaussian_ensemble(rng, 100, 8, np.pi, 0.0, 0.7, 0.7)
    before = ens.velocities.sum(axis=1)
    out = evolve_classical_nbody(ens, PHI, 0.002, 0.5)
    after = out.velocities.sum(axis=1)
    assert np.abs(after - before).max() < 1e-10


def test_two_body_cosine_against_ode_oracle():
    x0 = np.array([[1.0, 3.5]])
    v0 = np.array([[0.4, -0.2]])
    ens = ClassicalEnsemble(x0, v0)
    t_final = 2.0

    def rhs(t, y):
        x1, x2, u1, u2 = y
        # force_i = -(1/N) sum_j Phi'(x_i - x_j), Phi = cos -> Phi' = -sin
        f1 = 0.5 * (np.sin(x1 - x2) + np.sin(0.0))
        f2 = 0.5 * (np.sin(x2 - x1) + np.sin(0.0))
        return [u1, u2, f1, f2]

    sol = solve_ivp(
        rhs, (0, t_final), [1.0, 3.5, 0.4, -0.2], rtol=1e-12, atol=1e-12, dense_output=True
    )
    out = evolve_classical_nbody(ens, PHI, 1e-4, t_final)
    want = sol.y[:2, -1] % (2 * np.pi)
    got = out.positions[0]
    assert np.abs(got - want).max() < 1e-8
    assert np.abs(out.velocities[0] - sol.y[2:, -1]).max() < 1e-8


def test_vlasov_free_transport(rng):
    ens = sample_gaussian_ensemble(rng, 1, 20_000, np.pi, 0.3, 0.5, 0.5)
    out = evolve_vlasov(ens, TrigPotential({}), 0.01, 0.5)
    want = (ens.positions + 0.5 * ens.velocities) % (2 * np.pi)
    assert np.abs(out.positions - want).max() < 1e-10


def test_vlasov_uniform_state_is_stationary(rng):
    x = rng.uniform(0, 2 * np.pi, size=(1, 50_000))
    v = rng.normal(0.0, 0.5, size=(1, 50_000))
    ens = ClassicalEnsemble(x, v)
    out = evolve_vlasov(ens, PHI, 0.01, 0.3)
    # velocities change only through the near-zero empirical force
    assert np.abs(out.velocities - ens.velocities).max() < 0.05
    est0, _ = phase_mode_estimates(ens, [1.0, 2.0], [0.0, 0.0])
    est1, err1 = phase_mode_estimates(out, [1.0, 2.0], [0.0, 0.0])
    assert np.abs(est1 - est0).max() < 0.02


def test_vlasov_sampling_guard(rng):
    ens = sample_gaussian_ensemble(rng, 1, 100, np.pi, 0.0, 0.5, 0.5)
    with pytest.raises(SamplingError):
        evolve_vlasov(ens, PHI, 0.01, 0.1)
    evolve_vlasov(ens, PHI, 0.01, 0.1, allow_undersampled=True)


def test_particle_method_matches_semi_lagrangian_low_modes(rng):
    # small-amplitude potential: low Fourier modes agree to 3e-3
    q0, p0, sx, sv = np.pi, 0.0, 0.6, 0.6
    nx, nv, vmax = 128, 129, 4.0
    x = 2 * np.pi * np.arange(nx) / nx
    v = np.linspace(-vmax, vmax, nv)
    X, V = np.meshgrid(x, v, indexing="ij")
    f0 = np.exp(-((X - q0) ** 2) / (2 * sx**2) - (V - p0) ** 2 / (2 * sv**2))
    f0 /= f0.sum() * (x[1] - x[0]) * (v[1] - v[0])
    t_final = 0.8
    sol = vlasov_grid_solve(f0, x, v, SMALL, 0.005, t_final)

    ens = sample_gaussian_ensemble(rng, 1, 400_000, q0, p0, sx, sv)
    out = evolve_vlasov(ens, SMALL, 0.005, t_final)
    xi_list = [0.0, 1.0, 1.0, 2.0, 0.0]
    eta_list = [0.5, 0.0, 0.5, 0.5, 1.0]
    est, err = phase_mode_estimates(out, xi_list, eta_list)
    want = sol.density_modes(xi_list, eta_list)
    assert np.abs(est - want).max() < 3e-3


def test_mode_estimator_normalization(rng):
    ens = sample_gaussian_ensemble(rng, 10, 16, np.pi, 0.0, 0.5, 0.5)
    est, _ = phase_mode_estimates(ens, [0.0], [0.0])
    assert abs(est[0] - 1.0) < 1e-14


def test_characteristics_follow_grid_field(rng):
    # with the interacting flow replaced by the recorded field, the
    # characteristics of a tiny cloud track the mean-field flow
    q0, p0, sx, sv = np.pi, 0.0, 0.6, 0.6
    nx, nv, vmax = 128, 129, 4.0
    x = 2 * np.pi * np.arange(nx) / nx
    v = np.linspace(-vmax, vmax, nv)
    X, V = np.meshgrid(x, v, indexing="ij")
    f0 = np.exp(-((X - q0) ** 2) / (2 * sx**2) - (V - p0) ** 2 / (2 * sv**2))
    f0 /= f0.sum() * (x[1] - x[0]) * (v[1] - v[0])
    sol = vlasov_grid_solve(f0, x, v, SMALL, 0.004, 0.4)
    ens = sample_gaussian_ensemble(rng, 1, 200_000, q0, p0, sx, sv)
    moved = characteristics_in_field(ens, sol)
    est, _ = phase_mode_estimates(moved, [1.0, 1.0], [0.0, 0.5])
    want = sol.density_modes([1.0, 1.0], [0.0, 0.5])
    assert np.abs(est - want).max() < 5e-3
