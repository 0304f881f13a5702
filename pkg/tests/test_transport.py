"""Optimal-transport distances against an independent exact simplex oracle."""

import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mflab.transport_metrics import (
    DiscreteMeasure,
    dist1,
    mk2,
    l1_distance,
    tilde_coupling,
    distance_comparison,
    rasterize,
    export_measure_csv,
    import_measure_csv,
)


# ------------------------------------------------------------------ oracle


def transport_simplex_oracle(cost, a, b):
    """Transportation simplex with exact rational flows (independent of
    the HiGHS path): northwest-corner start, MODI improvement, Bland's
    rule on the entering cell.  Costs are floats; flows stay Fractions,
    so every iterate is an exact polytope vertex."""
    m, n = cost.shape
    a = [Fraction(x).limit_denominator(10**12) for x in a]
    b = [Fraction(x).limit_denominator(10**12) for x in b]
    # northwest corner basic feasible solution
    flow = {}
    basis = []
    i = j = 0
    ra, rb = a[:], b[:]
    while i < m and j < n:
        q = min(ra[i], rb[j])
        flow[(i, j)] = q
        basis.append((i, j))
        ra[i] -= q
        rb[j] -= q
        if ra[i] == 0 and i < m - 1:
            i += 1
        elif rb[j] == 0:
            j += 1
        else:
            i += 1
    # make sure the basis is a spanning tree (m+n-1 cells)
    k = 0
    while len(basis) < m + n - 1:
        cell = (k // n, k % n)
        if cell not in flow:
            flow[cell] = Fraction(0)
            basis.append(cell)
            if _has_cycle(basis, m, n):
                basis.pop()
                del flow[cell]
        k += 1

    for _ in range(10_000):
        u, v = _potentials(basis, cost, m, n)
        entering = None
        for i in range(m):
            for j in range(n):
                if (i, j) not in flow and cost[i, j] - u[i] - v[j] < -1e-12:
                    entering = (i, j)
                    break
            if entering:
                break
        if entering is None:
            val = sum(float(q) * cost[i, j] for (i, j), q in flow.items())
            return val, flow
        cyc = _cycle(basis + [entering], entering, m, n)
        give = [cyc[t] for t in range(1, len(cyc), 2)]
        theta = min(flow[c] for c in give)
        leaving = next(c for c in give if flow[c] == theta)
        for t, c in enumerate(cyc):
            if c == entering:
                flow[c] = flow.get(c, Fraction(0)) + theta
            elif t % 2 == 0:
                flow[c] += theta
            else:
                flow[c] -= theta
        del flow[leaving]
        basis = list(flow.keys())
        flow[entering] = flow.get(entering, Fraction(0))
    raise RuntimeError("oracle simplex did not terminate")


def _potentials(basis, cost, m, n):
    u = [None] * m
    v = [None] * n
    u[0] = 0.0
    changed = True
    while changed:
        changed = False
        for (i, j) in basis:
            if u[i] is not None and v[j] is None:
                v[j] = cost[i, j] - u[i]
                changed = True
            elif v[j] is not None and u[i] is None:
                u[i] = cost[i, j] - v[j]
                changed = True
    return [x if x is not None else 0.0 for x in u], [x if x is not None else 0.0 for x in v]


def _has_cycle(cells, m, n):
    return _cycle(cells, cells[-1], m, n) is not None


def _cycle(cells, start, m, n):
    """Alternating row/column cycle through ``start`` in the cell set."""
    cellset = set(cells)

    def search(path, horizontal):
        cur = path[-1]
        for cell in cellset:
            if cell == cur or cell in path[1:]:
                continue
            if horizontal and cell[0] == cur[0]:
                if cell == start and len(path) >= 4 and len(path) % 2 == 0:
                    return path
                nxt = search(path + [cell], False)
                if nxt:
                    return nxt
            if not horizontal and cell[1] == cur[1]:
                if cell == start and len(path) >= 4:
                    return path
                nxt = search(path + [cell], True)
                if nxt:
                    return nxt
        if horizontal:
            for cell in cellset:
                if cell[0] == cur[0] and cell == start and len(path) >= 4:
                    return path
        return None

    for first_dir in (True, False):
        out = search([start], first_dir)
        if out:
            return out
    return None


def _random_measure(rng, npts, dim=2, grid_weights=True):
    pts = rng.uniform(-2, 2, size=(npts, dim))
    if grid_weights:
        w = rng.integers(1, 9, size=npts).astype(float)
    else:
        w = rng.uniform(0.1, 1.0, size=npts)
    return DiscreteMeasure(pts, w / w.sum())


# ------------------------------------------------------------------- tests


def test_identical_measures_have_zero_distance(rng):
    mu = _random_measure(rng, 5)
    assert dist1(mu, mu) < 1e-12
    assert mk2(mu, mu) < 1e-9


def test_distant_diracs_cost_capped():
    mu = DiscreteMeasure([[0.0, 0.0]], [1.0])
    nu = DiscreteMeasure([[5.0, 0.0]], [1.0])
    assert abs(dist1(mu, nu) - 1.0) < 1e-12
    assert abs(mk2(mu, nu) - 5.0) < 1e-12


def test_translation_optimality():
    rng = np.random.default_rng(5)
    mu = _random_measure(rng, 6)
    shift = np.array([0.3, -0.4])
    nu = DiscreteMeasure(mu.support + shift, mu.weights)
    assert abs(mk2(mu, nu) - np.linalg.norm(shift)) < 1e-9


def test_matches_exact_simplex_oracle(rng):
    for _ in range(8):
        m = int(rng.integers(2, 7))
        n = int(rng.integers(2, 7))
        mu = _random_measure(rng, m)
        nu = _random_measure(rng, n)
        diff = mu.support[:, None, :] - nu.support[None, :, :]
        cost = np.minimum(1.0, np.sqrt((diff**2).sum(-1)))
        want, _ = transport_simplex_oracle(cost, mu.weights, nu.weights)
        assert abs(dist1(mu, nu) - want) < 1e-10
        cost2 = (diff**2).sum(-1)
        want2, _ = transport_simplex_oracle(cost2, mu.weights, nu.weights)
        assert abs(mk2(mu, nu) ** 2 - want2) < 1e-10


def test_uniform_measures_match_permutation_enumeration(rng):
    # for uniform weights the optimum is attained at a permutation
    npts = 5
    mu = DiscreteMeasure(rng.uniform(-2, 2, (npts, 2)), np.full(npts, 1 / npts))
    nu = DiscreteMeasure(rng.uniform(-2, 2, (npts, 2)), np.full(npts, 1 / npts))
    diff = mu.support[:, None, :] - nu.support[None, :, :]
    cost = np.minimum(1.0, np.sqrt((diff**2).sum(-1)))
    best = min(
        sum(cost[i, p[i]] for i in range(npts)) / npts
        for p in itertools.permutations(range(npts))
    )
    assert abs(dist1(mu, nu) - best) < 1e-10


def test_two_by_two_enumeration():
    mu = DiscreteMeasure([[0.0, 0.0], [1.0, 0.0]], [0.3, 0.7])
    nu = DiscreteMeasure([[0.0, 0.5], [1.0, 0.5]], [0.6, 0.4])
    # only one free variable t = plan[0,0] in [max(0, .3-.4), min(.3,.6)]
    d = np.sqrt(((np.array(mu.support)[:, None] - np.array(nu.support)[None]) ** 2).sum(-1)) ** 2
    best = min(
        t * d[0, 0] + (0.3 - t) * d[0, 1] + (0.6 - t) * d[1, 0] + (0.1 + t) * d[1, 1]
        for t in np.linspace(0.0, 0.3, 3001)
    )
    assert abs(mk2(mu, nu) ** 2 - best) < 1e-7


def test_dual_equals_primal(rng):
    # LP strong duality: reduced costs of the returned plan certify optimality
    mu = _random_measure(rng, 6)
    nu = _random_measure(rng, 6)
    val, plan = dist1(mu, nu, return_coupling=True)
    diff = mu.support[:, None, :] - nu.support[None, :, :]
    cost = np.minimum(1.0, np.sqrt((diff**2).sum(-1)))
    want, _ = transport_simplex_oracle(cost, mu.weights, nu.weights)
    assert abs(val - want) < 1e-10
    assert abs((plan * cost).sum() - val) < 1e-12


def test_tilde_coupling_cases(rng):
    mu = _random_measure(rng, 5)
    # identical: diagonal coupling, zero bound
    plan, bound = tilde_coupling(mu, mu)
    assert abs(bound) < 1e-12
    assert np.abs(plan - np.diag(np.diag(plan))).max() < 1e-15
    assert np.abs(np.sort(np.diag(plan)) - np.sort(mu.weights)).max() < 1e-12
    # disjoint supports: lambda = 0, bound 1, l1 = 2
    nu = DiscreteMeasure(mu.support + 10.0, mu.weights)
    plan, bound = tilde_coupling(mu, nu)
    assert abs(bound - 1.0) < 1e-12
    assert abs(l1_distance(mu, nu) - 2.0) < 1e-12
    # random pair: dist1 <= bound <= 1 - sum(lam) <= l1
    for _ in range(10):
        mu = _random_measure(rng, 6)
        nu = _random_measure(rng, 6)
        plan, bound = tilde_coupling(mu, nu)
        assert dist1(mu, nu) <= bound + 1e-10
        assert bound <= l1_distance(mu, nu) + 1e-12
        assert np.abs(plan.sum(1).sum() - 1.0) < 1e-12


def test_comparison_lemma(rng):
    for _ in range(25):
        mu = _random_measure(rng, int(rng.integers(2, 7)))
        nu = _random_measure(rng, int(rng.integers(2, 7)))
        rep = distance_comparison(mu, nu)
        assert rep["dist1"] <= min(rep["l1"], rep["mk2"]) + 1e-10
        assert rep["dist1"] <= 1.0 + 1e-12


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 5), st.integers(0, 10**6))
def test_metric_axioms(npts, seed):
    rng = np.random.default_rng(seed)
    mu = _random_measure(rng, npts)
    nu = _random_measure(rng, npts)
    rho = _random_measure(rng, npts)
    for dist in (dist1, mk2):
        dmn = dist(mu, nu)
        assert abs(dmn - dist(nu, mu)) < 1e-10
        assert dmn <= dist(mu, rho) + dist(rho, nu) + 1e-10


def test_support_size_guard():
    pts = np.column_stack([np.arange(401.0), np.zeros(401)])
    mu = DiscreteMeasure(pts, np.full(401, 1 / 401))
    with pytest.raises(ValueError):
        dist1(mu, mu)


def test_rasterize_preserves_mass_and_reports_error():
    from mflab.phase_space import PhaseGrid, gaussian_phase_function

    g = PhaseGrid(1, 32, velocity_cutoff=4.0)
    f = gaussian_phase_function(g, np.pi, 0.0, 0.5)
    mu, moved = rasterize(f, limit=200)
    assert abs(mu.weights.sum() - 1.0) < 1e-12
    assert len(mu) <= 200
    assert 0.0 <= moved < 0.05


def test_measure_csv_roundtrip(tmp_path, rng):
    mu = _random_measure(rng, 7)
    path = tmp_path / "mu.csv"
    export_measure_csv(mu, path)
    back = import_measure_csv(path)
    assert np.abs(back.support - mu.support).max() < 1e-15
    assert np.abs(back.weights - mu.weights).max() < 1e-15
