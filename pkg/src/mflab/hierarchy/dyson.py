"""Truncated time-ordered expansions of the marginal hierarchies.

A term of order n applies, inside-out, the streamed interaction
operators at ordered times t_1 <= ... <= t_n and finally the outer
streaming to time t.  Terms are evaluated by tracking the finitely many
mode arguments each operator touches: every branch shifts integer
position modes by potential modes, appends consumed particles at fixed
arguments, and streams velocity modes affinely in time, so the whole
term reduces to a weighted sum of pointwise evaluations of the
factorized initial data.  Cost grows like (branching * quadrature)^n,
which caps the usable order at K <= 6.

Flavors: "nbody" applies (T^N + C^N) with weights 1/N and (N-j)/N,
"hhn" applies C^N alone, "hartree" applies C alone (N = infinity).
"""

import csv

import numpy as np

from ..errors import HorizonError
from ..phase_space.norms import beta_norm
from ..phase_space.spectral import FourierPhaseFunction
from .operators import multiplier
from .sequences import DysonString

MAX_ORDER = 6


class _Particles:
    """Per-particle mode arguments; entries broadcast over the band."""

    __slots__ = ("xi", "eta")

    def __init__(self, xi, eta):
        self.xi = list(xi)
        self.eta = list(eta)

    def copy(self):
        return _Particles(list(self.xi), list(self.eta))

    @property
    def level(self):
        return len(self.xi)

    def stream(self, t):
        for i in range(len(self.xi)):
            self.eta[i] = self.eta[i] - t * self.xi[i]


class _TermEvaluator:
    def __init__(self, data, flavor, sigma, phi, hbar, N, shape):
        self.data = data
        self.flavor = flavor
        self.sigma = sigma
        self.fmodes = phi.fourier_modes()
        self.hbar = hbar
        self.N = N
        self.acc = np.zeros(shape, dtype=complex)

    def bottom(self, p, coeff):
        if self.N is not None and p.level > self.N:
            return
        total = coeff
        for i in range(p.level):
            total = total * self.data.eval_1p(p.xi[i], p.eta[i])
        self.acc = self.acc + total

    def descend(self, k, times, p, coeff):
        if k < 0:
            self.bottom(p, coeff)
            return
        t_k = times[k]
        q = p.copy()
        q.stream(-t_k)
        lvl = q.level
        ops = []
        if self.flavor == "nbody":
            choice = None if self.sigma is None else self.sigma[k]
            if choice in (None, 0):
                ops.append(("T", 1.0 / self.N))
            if choice in (None, 1):
                ops.append(("C", (self.N - lvl) / self.N))
        elif self.flavor == "hhn":
            ops.append(("C", (self.N - lvl) / self.N if self.N is not None else 1.0))
        else:
            ops.append(("C", 1.0))
        for name, w in ops:
            if w == 0.0:
                continue
            if name == "T":
                if lvl < 2:
                    continue
                for r in range(lvl):
                    for l in range(lvl):
                        if l == r:
                            continue
                        for h, ch in self.fmodes:
                            b = q.copy()
                            m = multiplier(h * (b.eta[r] - b.eta[l]), self.hbar)
                            b.xi[r] = b.xi[r] + h
                            b.xi[l] = b.xi[l] - h
                            b.stream(t_k)
                            self.descend(k - 1, times, b, coeff * (w * 0.5 * ch) * m)
            else:
                for r in range(lvl):
                    for h, ch in self.fmodes:
                        b = q.copy()
                        m = multiplier(h * b.eta[r], self.hbar)
                        b.xi[r] = b.xi[r] + h
                        b.xi.append(-h)
                        b.eta.append(0.0)
                        b.stream(t_k)
                        self.descend(k - 1, times, b, coeff * (w * ch) * m)


def _band_arguments(modes):
    j = modes.particles
    xi, eta = [], []
    for i in range(j):
        sh = [1] * (2 * j)
        sh[i] = len(modes.xi)
        xi.append(modes.xi.reshape(sh))
        sh = [1] * (2 * j)
        sh[j + i] = len(modes.eta)
        eta.append(modes.eta.reshape(sh))
    return xi, eta


def dyson_term(data, string, phi, hbar, N, modes, t=None):
    """One integrand string evaluated on the output band.

    ``t`` is the outer streaming time (defaults to the last slot time).
    """
    if string.order > MAX_ORDER:
        raise ValueError(f"expansion order capped at {MAX_ORDER}")
    if N is not None and modes.particles > N:
        return FourierPhaseFunction(modes, np.zeros(modes.shape, dtype=complex))
    if t is None:
        t = string.times[-1] if string.order else 0.0
    out_xi, out_eta = _band_arguments(modes)
    out_eta = [e - t * x for e, x in zip(out_eta, out_xi)]
    ev = _TermEvaluator(data, string.flavor, string.sigma, phi, hbar, N, modes.shape)
    ev.descend(string.order - 1, string.times, _Particles(out_xi, out_eta), 1.0)
    return FourierPhaseFunction(modes, ev.acc)


def simplex_nodes(t, n, order):
    """Gauss-Legendre nodes/weights for the ordered simplex
    0 <= t_1 <= ... <= t_n <= t, built by nesting the rule."""
    base_x, base_w = np.polynomial.legendre.leggauss(order)

    def on_interval(a, b):
        x = 0.5 * (b - a) * base_x + 0.5 * (a + b)
        w = 0.5 * (b - a) * base_w
        return x, w

    tuples = [((), 1.0, t)]  # (times-so-far reversed, weight, upper limit)
    for _ in range(n):
        new = []
        for ts, w, upper in tuples:
            xs, ws = on_interval(0.0, upper)
            for x, wx in zip(xs, ws):
                new.append((ts + (x,), w * wx, x))
        tuples = new
    out = []
    for ts, w, _ in tuples:
        out.append((tuple(reversed(ts)), w))
    return out


def dyson_partial_sum(
    data,
    flavor,
    K,
    t,
    phi,
    hbar,
    N,
    bands,
    quadrature_order=4,
    horizon=None,
):
    """Partial sum sum_{n<=K} of simplex-integrated terms.

    ``bands`` maps entry level j to its output ModeGrid.  Returns a dict
    with per-order integrated terms, the partial sums, and a per-order
    record list (flavor, n, j, quadrature order) for the term dump.
    """
    if K > MAX_ORDER:
        raise ValueError(f"expansion order capped at {MAX_ORDER}")
    if horizon is not None and abs(t) >= horizon:
        raise HorizonError(f"|t| = {abs(t)} at or beyond the horizon {horizon}")
    terms = {j: [] for j in bands}
    for n in range(K + 1):
        for j, modes in bands.items():
            if n == 0:
                term = dyson_term(
                    data, DysonString((), flavor), phi, hbar, N, modes, t=t
                )
            else:
                acc = np.zeros(modes.shape, dtype=complex)
                for times, w in simplex_nodes(t, n, quadrature_order):
                    string = DysonString(times, flavor)
                    acc += w * dyson_term(data, string, phi, hbar, N, modes, t=t).values
                term = FourierPhaseFunction(modes, acc)
            terms[j].append(term)
    partial = {
        j: FourierPhaseFunction(bands[j], sum(tt.values for tt in terms[j]))
        for j in bands
    }
    return {"terms": terms, "partial_sums": partial, "orders": list(range(K + 1))}


def term_norms(result, beta, alpha=None):
    """Per-order band norms; with alpha also the level-weighted sums."""
    out = []
    orders = result["orders"]
    for idx, n in enumerate(orders):
        row = {"n": n}
        seq = 0.0
        for j, terms in result["terms"].items():
            val = beta_norm(terms[idx], beta, allow_boundary=True)
            row[f"beta_norm_j{j}"] = val
            seq += np.exp(-(alpha or 0.0) * j) * val
        if alpha is not None:
            row["sequence_norm"] = seq
        out.append(row)
    return out


def dump_terms_csv(path, result, beta, quadrature_order, flavor):
    rows = term_norms(result, beta)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["flavor", "n", "sigma", "j", "beta_norm", "quadrature_order"])
        for row in rows:
            for key, val in row.items():
                if not key.startswith("beta_norm_j"):
                    continue
                j = int(key.split("beta_norm_j")[1])
                w.writerow([flavor, row["n"], "", j, f"{val:.17g}", quadrature_order])
