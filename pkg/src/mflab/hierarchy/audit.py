"""Numerical audit of the propagation estimates.

For random analytic test functions on mode lattices, each inequality is
evaluated as stated:

  streaming:  ||S(t) f||_beta <= ||f||_beta'          if (beta'-beta)/beta' >= |t|
  coupling:   ||S(-t) C S(t) f_{j+1}||_beta
                 <= (1+|t|) C0 / (e (beta'-beta)) ||f_{j+1}||_beta'
  pair term:  ||S(-t) T S(t) f_j||_beta
                 <= j (1+|t|) C(beta', t) / (e (beta'-beta)) ||f_j||_beta'

with C0 and C(beta', t) the weighted potential moments.  The report
records the worst slack; violations beyond tolerance indicate a broken
operator or norm, not a sharp inequality.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ..constants import c_phi
from ..phase_space.norms import beta_norm
from ..phase_space.spectral import FourierPhaseFunction, ModeGrid
from .operators import free_transport, transported_coupling, transported_pair


def random_mode_gaussian(modes, rng, components=2, width=(0.8, 1.6)):
    """Random analytic mixture directly in mode space: sums of
    exp(i q xi - i p eta - w (xi^2 + eta^2)) per particle, tensorized.
    Wide mode-space Gaussians keep the band edges empty."""
    j = modes.particles
    vals = np.ones(modes.shape, dtype=complex)
    for i in range(j):
        axis = np.zeros((len(modes.xi), len(modes.eta)), dtype=complex)
        for _ in range(components):
            q = rng.uniform(0, 2 * np.pi)
            p = rng.uniform(-0.6, 0.6)
            w = rng.uniform(*width)
            amp = rng.uniform(0.2, 1.0)
            axis += amp * np.exp(
                1j * q * modes.xi[:, None]
                - 1j * p * modes.eta[None, :]
                - w * (modes.xi[:, None] ** 2 + modes.eta[None, :] ** 2) / 2.0
            )
        sh = [1] * (2 * j)
        sh[i] = len(modes.xi)
        sh[j + i] = len(modes.eta)
        vals = vals * axis.reshape(sh)
    return FourierPhaseFunction(modes, vals)


@dataclass
class AuditReport:
    samples: int
    checks: int = 0
    violations: int = 0
    worst_slack: float = 0.0  # most positive lhs - rhs
    rows: list = field(default_factory=list)

    def record(self, name, lhs, rhs, tol):
        self.checks += 1
        slack = lhs - rhs
        self.worst_slack = max(self.worst_slack, slack)
        if slack > tol:
            self.violations += 1
        self.rows.append((name, lhs, rhs, slack))


def audit_propagation_bounds(
    samples,
    phi,
    hbar,
    beta,
    beta_prime,
    t_range=(0.0, 1.0),
    seed=0,
    tol=1e-9,
):
    """Run the three estimates on random analytic inputs; report slack."""
    rng = np.random.default_rng(seed)
    report = AuditReport(samples=samples)
    band1 = ModeGrid(1, np.arange(-8.0, 9.0), 0.5 * np.arange(-9.0, 10.0))
    band2 = ModeGrid(2, np.arange(-8.0, 9.0), 0.5 * np.arange(-9.0, 10.0))
    c0 = c_phi(0.0, 0.0, phi)
    t_admissible = (beta_prime - beta) / beta_prime
    for _ in range(samples):
        t = rng.uniform(*t_range)
        # streaming estimate, at an admissible time (including the edge)
        ts = min(t, t_admissible)
        for band in (band1, band2):
            f = random_mode_gaussian(band, rng)
            lhs = beta_norm(free_transport(f, ts), beta, allow_boundary=True)
            rhs = beta_norm(f, beta_prime, allow_boundary=True)
            report.record("streaming", lhs, rhs, tol)
        # coupling estimate at level 1 <- 2
        f2 = random_mode_gaussian(band2, rng)
        lhs = beta_norm(transported_coupling(f2, phi, hbar, t), beta, allow_boundary=True)
        rhs = (1 + t) * c0 / (math.e * (beta_prime - beta)) * beta_norm(
            f2, beta_prime, allow_boundary=True
        )
        report.record("coupling", lhs, rhs, tol)
        # pair estimate at level 2
        f2 = random_mode_gaussian(band2, rng)
        lhs = beta_norm(transported_pair(f2, phi, hbar, t), beta, allow_boundary=True)
        rhs = (
            2 * (1 + t) * c_phi(beta_prime, t, phi) / (math.e * (beta_prime - beta))
        ) * beta_norm(f2, beta_prime, allow_boundary=True)
        report.record("pair", lhs, rhs, tol)
    return report
