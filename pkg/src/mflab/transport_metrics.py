"""Exact discrete optimal-transport distances on phase space.

dist1 uses the bounded cost min(1, |z - z'|); mk2 is the quadratic
Wasserstein distance.  Both are computed as exact transportation linear
programs (HiGHS dual simplex, vertex solutions), which keeps the values
exact at the discrete level; continuous inputs are rasterized first with
the coarsening error reported separately.
"""

import csv as _csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

MAX_SUPPORT = 400


@dataclass
class DiscreteMeasure:
    """Weighted point masses in phase space (points may be 2j-dimensional)."""

    support: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        self.support = np.atleast_2d(np.asarray(self.support, dtype=float))
        self.weights = np.asarray(self.weights, dtype=float)
        if len(self.support) != len(self.weights):
            raise ValueError("support and weights length mismatch")
        if np.any(self.weights < -1e-15):
            raise ValueError("weights must be nonnegative")
        self.weights = np.clip(self.weights, 0.0, None)
        if abs(self.weights.sum() - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {self.weights.sum()}, not 1")
        if len(self.support) > 1:
            d2 = ((self.support[:, None, :] - self.support[None, :, :]) ** 2).sum(-1)
            np.fill_diagonal(d2, np.inf)
            if d2.min() <= 0.0:
                raise ValueError("support points must be distinct")

    def __len__(self):
        return len(self.weights)


def _pairwise_distance(mu, nu):
    diff = mu.support[:, None, :] - nu.support[None, :, :]
    return np.sqrt((diff**2).sum(-1))


def _solve_transport(cost, a, b):
    """Exact transportation LP; returns (value, coupling)."""
    m, n = cost.shape
    if m > MAX_SUPPORT or n > MAX_SUPPORT:
        raise ValueError(f"support exceeds the exact-LP limit of {MAX_SUPPORT} points")
    # equality constraints: row sums = a, column sums = b (drop the last
    # redundant row to keep the system full-rank)
    A = []
    rhs = []
    for i in range(m):
        row = np.zeros(m * n)
        row[i * n : (i + 1) * n] = 1.0
        A.append(row)
        rhs.append(a[i])
    for j in range(n - 1):
        col = np.zeros(m * n)
        col[j::n] = 1.0
        A.append(col)
        rhs.append(b[j])
    res = linprog(
        cost.ravel(),
        A_eq=np.asarray(A),
        b_eq=np.asarray(rhs),
        bounds=(0, None),
        method="highs",
    )
    if not res.success:
        raise RuntimeError(f"transport LP failed: {res.message}")
    plan = res.x.reshape(m, n)
    if np.abs(plan.sum(1) - a).max() > 1e-12 or np.abs(plan.sum(0) - b).max() > 1e-12:
        raise RuntimeError("transport plan violates marginal feasibility")
    return float(res.fun), plan


def dist1(mu, nu, return_coupling=False):
    """Monge-Kantorovich distance with cost min(1, |z - z'|)."""
    cost = np.minimum(1.0, _pairwise_distance(mu, nu))
    val, plan = _solve_transport(cost, mu.weights, nu.weights)
    return (val, plan) if return_coupling else val


def mk2(mu, nu, return_coupling=False):
    """Quadratic Wasserstein distance (square root of the optimal cost)."""
    cost = _pairwise_distance(mu, nu) ** 2
    val, plan = _solve_transport(cost, mu.weights, nu.weights)
    val = math.sqrt(max(val, 0.0))
    return (val, plan) if return_coupling else val


def _common_support(mu, nu):
    """Joint atom list with both weight vectors aligned to it."""
    pts = np.vstack([mu.support, nu.support])
    order = np.lexsort(pts.T[::-1])
    uniq = [pts[order[0]]]
    for idx in order[1:]:
        if np.abs(pts[idx] - uniq[-1]).max() > 1e-12:
            uniq.append(pts[idx])
    uniq = np.asarray(uniq)

    def project(meas):
        w = np.zeros(len(uniq))
        for pt, wt in zip(meas.support, meas.weights):
            k = int(np.argmin(((uniq - pt) ** 2).sum(1)))
            w[k] += wt
        return w

    return uniq, project(mu), project(nu)


def l1_distance(mu, nu):
    """Total variation style L1 distance on the common atom list."""
    _, a, b = _common_support(mu, nu)
    return float(np.abs(a - b).sum())


def tilde_coupling(mu, nu):
    """Explicit diagonal-plus-product coupling and its dist1 upper bound.

    With lam = min(a, b) on the common support, the coupling keeps lam
    on the diagonal and couples the leftovers independently; the induced
    cost bound satisfies bound <= 1 - sum(lam) <= l1(mu, nu).
    """
    pts, a, b = _common_support(mu, nu)
    lam = np.minimum(a, b)
    rest = 1.0 - lam.sum()
    plan = np.diag(lam)
    if rest > 1e-15:
        plan = plan + np.outer(a - lam, b - lam) / rest
    diff = pts[:, None, :] - pts[None, :, :]
    cost = np.minimum(1.0, np.sqrt((diff**2).sum(-1)))
    bound = float((plan * cost).sum())
    if np.abs(plan.sum(1) - a).max() > 1e-12 or np.abs(plan.sum(0) - b).max() > 1e-12:
        raise RuntimeError("tilde coupling marginals inexact")
    return plan, bound


def distance_comparison(mu, nu, slack=1e-10):
    """dist1, mk2 and l1 side by side; enforces dist1 <= min(l1, mk2)."""
    d1 = dist1(mu, nu)
    d2 = mk2(mu, nu)
    l1 = l1_distance(mu, nu)
    if d1 > min(l1, d2) + slack:
        raise RuntimeError(
            f"comparison inequality violated: dist1={d1} > min(l1={l1}, mk2={d2})"
        )
    return {"dist1": d1, "mk2": d2, "l1": l1}


def rasterize(f, limit=MAX_SUPPORT):
    """Coarsen a 1-particle phase function to at most ``limit`` atoms.

    Keeps the heaviest cells and moves each dropped cell's mass to the
    nearest kept cell, so the total mass is preserved exactly.  Returns
    (measure, moved) where moved = sum of mass * displacement, an upper
    bound for the dist1 coarsening error.
    """
    if f.grid.particles != 1:
        raise ValueError("rasterize works on 1-particle functions")
    vals = f.values * f.grid.cell_volume
    if vals.min() < -1e-12 * max(vals.max(), 1e-300):
        raise ValueError("rasterize needs a nonnegative function")
    vals = np.clip(vals, 0.0, None)
    X, V = np.meshgrid(f.grid.x, f.grid.v, indexing="ij")
    pts = np.column_stack([X.ravel(), V.ravel()])
    w = vals.ravel()
    order = np.argsort(w)[::-1]
    keep = order[:limit]
    drop = order[limit:]
    kept_pts = pts[keep]
    kept_w = w[keep].copy()
    moved = 0.0
    for idx in drop:
        if w[idx] <= 0.0:
            continue
        d2 = ((kept_pts - pts[idx]) ** 2).sum(1)
        k = int(np.argmin(d2))
        kept_w[k] += w[idx]
        moved += w[idx] * min(1.0, math.sqrt(d2[k]))
    total = kept_w.sum()
    mask = kept_w > 0.0
    return DiscreteMeasure(kept_pts[mask], kept_w[mask] / total), moved


def export_measure_csv(mu, path):
    if mu.support.shape[1] != 2:
        raise ValueError("CSV format is (x, v, weight): 1-particle measures only")
    with open(path, "w", newline="") as fh:
        w = _csv.writer(fh)
        w.writerow(["x", "v", "weight"])
        for (x, v), wt in zip(mu.support, mu.weights):
            w.writerow([f"{x:.17g}", f"{v:.17g}", f"{wt:.17g}"])


def import_measure_csv(path):
    pts, wts = [], []
    with open(path, newline="") as fh:
        r = _csv.reader(fh)
        header = next(r)
        if header != ["x", "v", "weight"]:
            raise ValueError(f"unexpected CSV header {header}")
        for row in r:
            pts.append((float(row[0]), float(row[1])))
            wts.append(float(row[2]))
    return DiscreteMeasure(np.asarray(pts), np.asarray(wts))
