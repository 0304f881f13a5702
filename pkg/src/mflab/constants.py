"""Closed-form evaluation of every rate constant, horizon and threshold
used by the convergence estimates, with bisection for the implicitly
defined ones.

Dimension d enters the formulas as a parameter even though the grid
numerics elsewhere fix d = 1.  All logarithms are natural; the literal
constants log 2 appearing inside exponents are kept exactly as written
in the estimates.
"""

import json
import math
from dataclasses import dataclass, field, asdict

from .errors import HorizonError
from .potential import TrigPotential

LOG2 = math.log(2.0)
E = math.e


def c_phi(beta, t, phi):
    """Mode-weighted force size sum_k k*|c_k|*exp(2*beta*k*(1+|t|)).

    This is the finite-sum torus version of the weighted force-moment
    integral; beta = 0 gives the plain first moment.
    """
    return sum(
        k * abs(c) * math.exp(2.0 * beta * k * (1.0 + abs(t)))
        for k, c in phi.modes.items()
    )


def solve_beta0_and_horizon(alpha, beta, beta_prime, phi, tol=1e-12):
    """Unique beta0 in (beta, beta') balancing the expansion growth rate
    against the analyticity margin, and the horizon T = (beta0-beta)/beta0.

    G(b) = 2*(1+s)*s*c_phi(beta', s)*e^alpha - (beta' - b),  s = (b-beta)/b,
    is increasing with G(beta) < 0 < G(beta'), so bisection converges; a
    zero potential pushes the root to beta0 = beta' exactly.
    """
    if not 0 < beta < beta_prime:
        raise ValueError("need 0 < beta < beta_prime")
    if phi.is_zero:
        b0 = beta_prime
        return b0, (b0 - beta) / b0

    def g(b):
        s = (b - beta) / b
        return 2.0 * (1.0 + s) * s * c_phi(beta_prime, s, phi) * math.exp(alpha) - (
            beta_prime - b
        )

    lo, hi = beta, beta_prime
    if not g(lo) < 0.0 < g(hi):
        raise RuntimeError("no sign change; invalid rate parameters")
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if g(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    b0 = 0.5 * (lo + hi)
    if abs(g(b0)) > tol:
        raise RuntimeError(f"bisection residual {g(b0)} above {tol}")
    return b0, (b0 - beta) / b0


def x_of_a(a):
    """Maximizer of x*(a+x)*e^{-x} on [0, inf): 1 + (sqrt(a^2+4)-a)/2."""
    return 1.0 + 0.5 * (math.sqrt(a * a + 4.0) - a)


def gamma_jt(j, tau):
    """N-free dominating constant for the truncation factor c_{n0}.

    Evaluates exp(max_x x*(a+x)e^{-x} / log(1/tau)^2) with a = (j+1)*log(1/tau).
    """
    if not 0 < tau < 1:
        raise ValueError("tau must lie in (0, 1)")
    L = math.log(1.0 / tau)
    a = (j + 1) * L
    x = x_of_a(a)
    return math.exp((a * x + x * x) / (math.exp(x) * L * L))


def n0_of_N(N, tau):
    """Truncation depth floor(log N / log(1/tau)) + 1."""
    return int(math.floor(math.log(N) / math.log(1.0 / tau))) + 1


def c_n0(n0, j, N):
    """exp((n0-1)*(j+n0)/N); equals 1 at n0 = 1."""
    return math.exp((n0 - 1) * (j + n0) / N)


def c1(j, tau):
    """(j+1)/(1-tau)^2 + 2*tau/(1-tau)^3."""
    return (j + 1) / (1.0 - tau) ** 2 + 2.0 * tau / (1.0 - tau) ** 3


def C_jtau(j, tau):
    """(1 + gamma(j,tau)) * c1(j,tau) + 4/(1-tau)."""
    return (1.0 + gamma_jt(j, tau)) * c1(j, tau) + 4.0 / (1.0 - tau)


def D_tau(tau):
    """exp((log(1/tau) + 3) / (e * log(tau)^2))."""
    L = math.log(1.0 / tau)
    return math.exp((L + 3.0) / (E * L * L))


def mean_field_error_bound(j, tau, N, alpha, f_in_norm):
    """Level-j error bound tau/N * C(j,tau) * e^{alpha(j-1)} * ||F||/(1 - e^{-alpha}||F||).

    With the default alpha = log(2*||F||) the trailing factor collapses
    to (2*||F||)^j; the tensorized-initial-data geometric sum requires
    e^{-alpha}*||F|| < 1.
    """
    r = math.exp(-alpha) * f_in_norm
    if r >= 1.0:
        raise ValueError("alpha too small: geometric initial-data sum diverges")
    pref = math.exp(alpha * (j - 1)) * f_in_norm / (1.0 - r)
    return C_jtau(j, tau) * tau / N * pref


def j_range_bound(N, tau, alpha_prime):
    """Largest admissible level floor((log N + log(1/tau)) / (alpha' + 1/(e log(1/tau))))."""
    L = math.log(1.0 / tau)
    return int(math.floor((math.log(N) + L) / (alpha_prime + 1.0 / (E * L))))


def comparison_n0(j):
    """Smallest n >= 1 with 2^n*((j+n)^2/(4 e^{2n}) + 2/4^n) <= 1."""
    n = 1
    while True:
        if 2.0**n * ((j + n) ** 2 / (4.0 * math.exp(2.0 * n)) + 2.0 / 4.0**n) <= 1.0:
            return n
        n += 1
        if n > 10_000:
            raise RuntimeError("threshold search failed to terminate")


def comparison_N0(j):
    """Admissibility threshold e^{2 n0(j) + 2}."""
    return math.exp(2 * comparison_n0(j) + 2)


def hbar_dependent_bound(j, t, N, hbar, phi):
    """Trace-norm mean-field rate at fixed hbar, with its admissibility.

    Returns (bound, thresholds, admissible) where thresholds holds
    (N0(j), exp(2^{16|Phi|t/hbar + 1} j), T_hbar).
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    sup = phi.sup_norm
    if sup <= 0:
        raise ValueError("comparison bound needs a nonzero potential")
    expo = 16.0 * t * sup / hbar
    bound = 2.0 ** (j + 1 + expo) / N ** (2.0 ** (-1.0 - expo) * LOG2)
    n_zero = comparison_N0(j)
    try:
        exp_thresh = math.exp(2.0 ** (expo + 1.0) * j)
    except OverflowError:
        exp_thresh = math.inf
    t_hbar = hbar / (16.0 * sup)
    admissible = N >= max(n_zero, exp_thresh)
    return bound, (n_zero, exp_thresh, t_hbar), admissible


def lam_const(phi):
    """3 + 4*Lip(grad Phi)^2."""
    return 3.0 + 4.0 * phi.grad_lipschitz**2


def c_estimu(phi):
    """8*||grad Phi||_inf / (3 + 4*Lip(grad Phi)^2)."""
    return 8.0 * phi.grad_sup_norm / lam_const(phi)


def B_bound(hbar, j, t, phi, d=1):
    """2*d*hbar*(1 + j*e^{Lambda t})."""
    return 2.0 * d * hbar * (1.0 + j * math.exp(lam_const(phi) * t))


def phi_kN(k, N):
    """2^{-k} * log N."""
    return 2.0 ** (-k) * math.log(N)


def hat_hbar(N, j, t, phi):
    """16*||Phi||*t*log2 / (loglog N - log(2j)); needs loglog N > log(2j)."""
    denom = math.log(math.log(N)) - math.log(2.0 * j)
    if denom <= 0:
        raise ValueError("N too small: loglog N must exceed log(2j)")
    return 16.0 * phi.sup_norm * t * LOG2 / denom


def _a_n_term(N, hbar, j, t, phi):
    """Squared trace-norm rate 2^{2j+2+32t|Phi|/hbar} / N^{2^{-16t|Phi|/hbar} log2}."""
    expo = 16.0 * t * phi.sup_norm / hbar
    return 2.0 ** (2 * j + 2 + 2 * expo) / N ** (2.0 ** (-expo) * LOG2)


def A_bound(N, hbar, j, t, phi, d=1):
    """min of the squared trace-norm rate and the transport rate B."""
    return min(_a_n_term(N, hbar, j, t, phi), B_bound(hbar, j, t, phi, d))


def solve_hbar_star(N, j, t_star, phi, d=1, tol=1e-10):
    """hbar at which the squared trace-norm rate crosses B(hbar, j, t*).

    g(h) = log(N-term) - log(B) is continuous and decreasing from +inf
    to -inf, so a geometric bracket plus bisection pins the unique root.
    Returns (hbar_star, residual) with residual = |A_N(h*) - B(h*)|.
    """
    lam = lam_const(phi)
    sup = phi.sup_norm

    def g(h):
        expo = 16.0 * t_star * sup / h
        log_n_term = (2 * j + 2 + 2 * expo) * LOG2 - (2.0 ** (-expo) * LOG2) * math.log(N)
        log_b = math.log(2.0 * d * h * (1.0 + j * math.exp(lam * t_star)))
        return log_n_term - log_b

    lo = hi = max(t_star * sup, 1e-3)
    while g(lo) < 0:
        lo /= 2.0
        if lo < 1e-300:
            raise RuntimeError("failed to bracket hbar_star from below")
    while g(hi) > 0:
        hi *= 2.0
        if hi > 1e300:
            raise RuntimeError("failed to bracket hbar_star from above")
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if g(mid) > 0:
            lo = mid
        else:
            hi = mid
    h = 0.5 * (lo + hi)
    residual = abs(_a_n_term(N, h, j, t_star, phi) - B_bound(h, j, t_star, phi, d))
    if residual > tol:
        raise RuntimeError(f"hbar_star residual {residual} above {tol}")
    return h, residual


def interpolation_bound(N, j, t_star, phi, d=1):
    """Uniform-in-hbar squared-distance bound and its ingredients.

    Returns a dict with hbar_star, its residual, hat_hbar, the two
    candidate bounds B(hbar_star), B(hat_hbar), the combined E bound
    max(B(h*), B(h^)) + j*C*e^{Lambda t*}/N, and the asymptotic loglog
    form 64*log2*d*t*|Phi|*(1 + j e^{Lambda t})/loglog N.
    """
    hh = hat_hbar(N, j, t_star, phi)
    hs, residual = solve_hbar_star(N, j, t_star, phi, d)
    b_star = B_bound(hs, j, t_star, phi, d)
    b_hat = B_bound(hh, j, t_star, phi, d)
    tail = j * c_estimu(phi) * math.exp(lam_const(phi) * t_star) / N
    e_bound = max(b_star, b_hat) + tail
    loglog = (
        64.0 * LOG2 * d * t_star * phi.sup_norm
        * (1.0 + j * math.exp(lam_const(phi) * t_star))
        / math.log(math.log(N))
    )
    return {
        "hbar_star": hs,
        "hbar_star_residual": residual,
        "hat_hbar": hh,
        "B_at_hbar_star": b_star,
        "B_at_hat_hbar": b_hat,
        "mean_field_tail": tail,
        "E_bound": e_bound,
        "loglog_bound": loglog,
    }


def comparison_branch(N, hbar, j, t, t_star, phi, d=1):
    """Alternative used in the uniform estimate: branch 'a' when hbar is
    above the crossover hat_hbar(N, j, t), else 'b'.  Returns the branch
    label and the corresponding bound at the top time t_star."""
    hh = hat_hbar(N, j, t, phi)
    tail = j * c_estimu(phi) * math.exp(lam_const(phi) * t_star) / N
    if hbar >= hh:
        return "a", A_bound(N, hbar, j, t_star, phi, d) + tail
    return "b", B_bound(hat_hbar(N, j, t_star, phi), j, t_star, phi, d) + tail


def deviation_bound(t, alpha, beta, beta_prime, phi, f_norm, v_moment_norms):
    """Short-time deviation of the level sequence from its initial data:

    |t| * ( f_norm / (pole - |t|) + sum_l v_moment_norms[l] / (e*(beta'-beta)) )

    with pole = (beta'-beta) / (3*(1+|t|)*c_phi(beta', t)*e^alpha); a zero
    potential removes the first term entirely.
    """
    at = abs(t)
    vterm = sum(v_moment_norms) / (E * (beta_prime - beta))
    if phi.is_zero:
        return at * vterm
    pole = (beta_prime - beta) / (3.0 * (1.0 + at) * c_phi(beta_prime, t, phi) * math.exp(alpha))
    if at >= pole:
        raise HorizonError(f"|t| = {at} at or beyond the deviation pole {pole}")
    return at * (f_norm / (pole - at) + vterm)


@dataclass(frozen=True)
class RateParameters:
    """Inputs of the full rate report."""

    beta: float
    beta_prime: float
    potential: TrigPotential
    hbar: float
    j: int
    t: float
    N: int
    f_in_norm: float
    d: int = 1
    alpha: float = None
    t_star: float = None

    def __post_init__(self):
        if not 0 < self.beta < self.beta_prime:
            raise ValueError("need 0 < beta < beta_prime")
        if self.N < self.j or self.j < 1:
            raise ValueError("need N >= j >= 1")
        if self.f_in_norm < 1.0:
            raise ValueError("density initial data has norm >= 1")
        if self.alpha is None:
            object.__setattr__(self, "alpha", math.log(self.f_in_norm) + LOG2)
        if self.t_star is None:
            object.__setattr__(self, "t_star", abs(self.t) if self.t else 1.0)

    @property
    def alpha_prime(self):
        return self.alpha + LOG2


@dataclass
class RateReport:
    c_phi_0: float
    c_phi_beta_t: float
    beta0: float
    horizon: float
    tau: float
    x_of_a: float
    gamma_jt: float
    n0_N: int
    c_n0: float
    c1: float
    C_jtau: float
    D_tau: float
    maineq_bound: float
    j_max: int
    lam: float
    c_estimu: float
    comparison_bound: float
    comparison_N0: float
    comparison_exp_threshold: float
    comparison_T_hbar: float
    comparison_admissible: bool
    phi_1N: float
    hat_hbar: float
    hbar_star: float
    hbar_star_residual: float
    B_at_hbar_star: float
    B_at_hat_hbar: float
    E_bound: float
    loglog_bound: float
    deviation_bound: float

    def to_json(self):
        d = asdict(self)
        d["format_version"] = 1
        return json.dumps(d, indent=2, sort_keys=True)

    def csv_rows(self):
        d = asdict(self)
        return [(k, repr(v)) for k, v in sorted(d.items())]


def rate_report(p, v_moment_norms=None):
    """Evaluate every constant of the estimates at the given parameters."""
    phi = p.potential
    beta0, T = solve_beta0_and_horizon(p.alpha, p.beta, p.beta_prime, phi)
    at = abs(p.t)
    if at >= T:
        raise HorizonError(f"|t| = {at} at or beyond the horizon T = {T}")
    tau = at / T
    gam = gamma_jt(p.j, tau) if tau > 0 else 1.0
    a = (p.j + 1) * (math.log(1.0 / tau) if tau > 0 else math.inf)
    xa = x_of_a(a) if math.isfinite(a) else 1.0
    n0 = n0_of_N(p.N, tau) if tau > 0 else 1
    cj = C_jtau(p.j, tau) if tau > 0 else 2.0 * (p.j + 1) + 4.0
    c_one = c1(p.j, tau)
    bound = mean_field_error_bound(p.j, tau, p.N, p.alpha, p.f_in_norm) if tau > 0 else 0.0
    jmax = j_range_bound(p.N, tau, p.alpha_prime) if tau > 0 else 0
    if phi.is_zero:
        comp = (math.inf, (comparison_N0(p.j), math.inf, math.inf), False)
        lam = 3.0
        cu = 0.0
        hh = hs = res = bs = bh = eb = ll = math.nan
    else:
        comp = hbar_dependent_bound(p.j, at, p.N, p.hbar, phi)
        lam = lam_const(phi)
        cu = c_estimu(phi)
        try:
            interp = interpolation_bound(p.N, p.j, p.t_star, phi, p.d)
            hh = interp["hat_hbar"]
            hs = interp["hbar_star"]
            res = interp["hbar_star_residual"]
            bs = interp["B_at_hbar_star"]
            bh = interp["B_at_hat_hbar"]
            eb = interp["E_bound"]
            ll = interp["loglog_bound"]
        except ValueError:
            hh = hs = res = bs = bh = eb = ll = math.nan
    if v_moment_norms is None:
        v_moment_norms = [0.0] * p.d
    try:
        dev = deviation_bound(
            p.t, p.alpha, p.beta, p.beta_prime, phi, _seq_norm_geom(p), v_moment_norms
        )
    except HorizonError:
        # the deviation estimate has its own, earlier pole; the rest of
        # the report stays valid for |t| < T
        dev = math.inf
    return RateReport(
        c_phi_0=c_phi(0.0, 0.0, phi),
        c_phi_beta_t=c_phi(p.beta_prime, p.t, phi),
        beta0=beta0,
        horizon=T,
        tau=tau,
        x_of_a=xa,
        gamma_jt=gam,
        n0_N=n0,
        c_n0=c_n0(n0, p.j, p.N),
        c1=c_one,
        C_jtau=cj,
        D_tau=D_tau(tau) if tau > 0 else math.nan,
        maineq_bound=bound,
        j_max=jmax,
        lam=lam,
        c_estimu=cu,
        comparison_bound=comp[0],
        comparison_N0=comp[1][0],
        comparison_exp_threshold=comp[1][1],
        comparison_T_hbar=comp[1][2],
        comparison_admissible=comp[2],
        phi_1N=phi_kN(1, p.N),
        hat_hbar=hh,
        hbar_star=hs,
        hbar_star_residual=res,
        B_at_hbar_star=bs,
        B_at_hat_hbar=bh,
        E_bound=eb,
        loglog_bound=ll,
        deviation_bound=dev,
    )


def _seq_norm_geom(p):
    """||f^in||_{alpha,beta'} for tensorized initial data: the geometric
    sum of e^{-alpha j} * f_in_norm^j."""
    r = math.exp(-p.alpha) * p.f_in_norm
    return r / (1.0 - r)
