"""Periodic phase-space grids and grid functions.

Positions live on a torus of circumference ``period`` (default 2*pi),
velocities in a symmetric window [-V, V).  A j-particle grid is the
tensor product of j position axes followed by j velocity axes, stored
row-major in that order.  All axes carry ``points_per_axis`` points so
spectral transforms stay square.

Mode conventions (see :mod:`mflab.phase_space.spectral`): position
modes are the integers -n/2 .. n/2-1 (period 2*pi), velocity modes are
integer multiples of pi/V.
"""

import csv
import math
from dataclasses import dataclass

import numpy as np

from ..errors import ResolutionError

TWO_PI = 2.0 * math.pi


def _is_power_of_two(n):
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class PhaseGrid:
    particles: int
    points_per_axis: int
    period: float = TWO_PI
    velocity_cutoff: float = math.pi

    def __post_init__(self):
        if self.particles < 1:
            raise ValueError("particles must be >= 1")
        if self.points_per_axis < 8 or not _is_power_of_two(self.points_per_axis):
            raise ValueError("points_per_axis must be a power of two >= 8")
        if self.period <= 0 or self.velocity_cutoff <= 0:
            raise ValueError("period and velocity_cutoff must be positive")

    @property
    def n(self):
        return self.points_per_axis

    @property
    def dx(self):
        return self.period / self.n

    @property
    def dv(self):
        return 2.0 * self.velocity_cutoff / self.n

    @property
    def x(self):
        return self.dx * np.arange(self.n)

    @property
    def v(self):
        return -self.velocity_cutoff + self.dv * np.arange(self.n)

    @property
    def cell_volume(self):
        return (self.dx * self.dv) ** self.particles

    @property
    def xi(self):
        """Integer position modes, ascending."""
        return (np.arange(self.n) - self.n // 2) * (TWO_PI / self.period)

    @property
    def deta(self):
        return math.pi / self.velocity_cutoff

    @property
    def eta(self):
        """Velocity modes, ascending, spacing pi/V."""
        return (np.arange(self.n) - self.n // 2) * self.deta

    @property
    def shape(self):
        return (self.n,) * (2 * self.particles)

    def with_particles(self, k):
        return PhaseGrid(k, self.points_per_axis, self.period, self.velocity_cutoff)

    def max_mode(self):
        return self.n // 2 - 1

    def require_mode(self, xi=0.0, eta=0.0):
        if abs(xi) > self.n // 2 - 1 or abs(eta) > (self.n // 2 - 1) * self.deta:
            raise ResolutionError(
                f"mode (xi={xi}, eta={eta}) outside the resolved band of n={self.n}"
            )


class PhaseFunction:
    """Real values of a phase-space function on a PhaseGrid.

    Wigner functions may be negative; nothing here assumes a sign.
    """

    def __init__(self, grid, values, normalized=False):
        values = np.asarray(values, dtype=float)
        if values.shape != grid.shape:
            raise ValueError(f"values shape {values.shape} != grid shape {grid.shape}")
        self.grid = grid
        self.values = values
        if normalized:
            mass = self.integral()
            if abs(mass - 1.0) > 1e-10 * max(1.0, abs(mass)):
                raise ValueError(f"declared probability-normalized but mass = {mass!r}")

    def integral(self):
        return float(self.values.sum() * self.grid.cell_volume)

    def l1_norm(self):
        return float(np.abs(self.values).sum() * self.grid.cell_volume)

    def copy(self):
        return PhaseFunction(self.grid, self.values.copy())

    def __add__(self, other):
        self._check_same_grid(other)
        return PhaseFunction(self.grid, self.values + other.values)

    def __sub__(self, other):
        self._check_same_grid(other)
        return PhaseFunction(self.grid, self.values - other.values)

    def __mul__(self, scalar):
        return PhaseFunction(self.grid, self.values * float(scalar))

    __rmul__ = __mul__

    def _check_same_grid(self, other):
        if other.grid != self.grid:
            raise ValueError("grids differ")


def marginal(f, k):
    """Integrate out particles k+1..j of a j-particle phase function."""
    j = f.grid.particles
    if k > j or k < 1:
        raise ValueError(f"marginal onto k={k} particles undefined for j={j}")
    if k == j:
        return f.copy()
    drop = tuple(range(k, j)) + tuple(range(j + k, 2 * j))
    w = (f.grid.dx * f.grid.dv) ** (j - k)
    vals = f.values.sum(axis=drop) * w
    return PhaseFunction(f.grid.with_particles(k), vals)


def tensor_product(f, g):
    """(f (x) g) on the combined particle grid; factors must share axes."""
    if (f.grid.points_per_axis, f.grid.period, f.grid.velocity_cutoff) != (
        g.grid.points_per_axis,
        g.grid.period,
        g.grid.velocity_cutoff,
    ):
        raise ValueError("incompatible grids for tensor product")
    jf, jg = f.grid.particles, g.grid.particles
    a = f.values.reshape(f.values.shape[:jf] + (1,) * jg + f.values.shape[jf:] + (1,) * jg)
    b = g.values.reshape((1,) * jf + g.values.shape[:jg] + (1,) * jf + g.values.shape[jg:])
    return PhaseFunction(f.grid.with_particles(jf + jg), a * b)


def gaussian_phase_function(grid, q0, p0, sigma_x, sigma_v=None, images=3):
    """Normalized Gaussian bump, periodized in x, truncated in v.

    The x-periodization sums ``2*images + 1`` translates, which is exact
    to machine precision for sigma_x well below the period.
    """
    if grid.particles != 1:
        raise ValueError("single-particle helper")
    if sigma_v is None:
        sigma_v = sigma_x
    x, v = grid.x, grid.v
    fx = np.zeros_like(x)
    for m in range(-images, images + 1):
        fx += np.exp(-((x - q0 + m * grid.period) ** 2) / (2.0 * sigma_x**2))
    fv = np.exp(-((v - p0) ** 2) / (2.0 * sigma_v**2))
    vals = np.outer(fx, fv)
    vals /= vals.sum() * grid.dx * grid.dv
    return PhaseFunction(grid, vals)


def export_csv(f, path):
    """Write a 1-particle phase function as (x, v, value) rows."""
    if f.grid.particles != 1:
        raise ValueError("CSV export is defined for 1-particle functions")
    x, v = f.grid.x, f.grid.v
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "v", "value"])
        for i in range(f.grid.n):
            for m in range(f.grid.n):
                w.writerow([f"{x[i]:.17g}", f"{v[m]:.17g}", f"{f.values[i, m]:.17g}"])


def import_csv(grid, path):
    vals = np.zeros(grid.shape)
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r)
        if header != ["x", "v", "value"]:
            raise ValueError(f"unexpected CSV header {header}")
        flat = [float(row[2]) for row in r]
    vals[...] = np.asarray(flat).reshape(grid.shape)
    return PhaseFunction(grid, vals)
