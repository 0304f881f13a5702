"""Rate constants against a 50-digit mpmath mirror and structure checks."""

import math

import mpmath as mp
import numpy as np
import pytest

from mflab import constants as C
from mflab.errors import HorizonError
from mflab.potential import TrigPotential

mp.mp.dps = 50

PHI = TrigPotential({1: 0.1})
FNORM = math.e  # benchmark Gaussian beta'-norm scale


# ---------------------------------------------------------------- oracles


def mp_cphi(beta, t, phi):
    return mp.fsum(
        k * abs(c) * mp.e ** (2 * mp.mpf(beta) * k * (1 + abs(mp.mpf(t))))
        for k, c in phi.modes.items()
    )


def mp_beta0(alpha, beta, bp, phi):
    beta, bp, alpha = mp.mpf(beta), mp.mpf(bp), mp.mpf(alpha)

    def g(b):
        s = (b - beta) / b
        return 2 * (1 + s) * s * mp_cphi(bp, s, phi) * mp.e**alpha - (bp - b)

    return mp.findroot(g, (beta + bp) / 2, tol=mp.mpf(10) ** (-40))


def mp_x(a):
    a = mp.mpf(a)
    return 1 + (mp.sqrt(a * a + 4) - a) / 2


def mp_gamma(j, tau):
    L = mp.log(1 / mp.mpf(tau))
    a = (j + 1) * L
    x = mp_x(a)
    return mp.e ** ((a * x + x * x) / (mp.e**x * L * L))


def mp_c1(j, tau):
    tau = mp.mpf(tau)
    return (j + 1) / (1 - tau) ** 2 + 2 * tau / (1 - tau) ** 3


def mp_C(j, tau):
    return (1 + mp_gamma(j, tau)) * mp_c1(j, tau) + 4 / (1 - mp.mpf(tau))


def close(a, b, rel=1e-12):
    b = float(b)
    return abs(a - b) <= rel * max(1.0, abs(a), abs(b))


# ------------------------------------------------------------------ tests


def test_c_phi_single_mode_pair():
    # modes +-1 with weight c/2 each: c * e^{2 beta (1+|t|)}
    c = 0.3
    phi = TrigPotential({1: c})
    beta, t = 0.4, 0.7
    assert close(C.c_phi(beta, t, phi), c * math.exp(2 * beta * (1 + t)))
    assert close(C.c_phi(0.0, 5.0, phi), c)


def test_c_phi_increasing_in_time():
    vals = [C.c_phi(0.3, t, PHI) for t in np.linspace(0, 2, 9)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_beta0_matches_high_precision_oracle():
    alpha = math.log(FNORM) + math.log(2)
    b0, T = C.solve_beta0_and_horizon(alpha, 0.25, 0.5, PHI)
    want = mp_beta0(alpha, 0.25, 0.5, PHI)
    assert close(b0, want)
    assert close(T, (want - mp.mpf("0.25")) / want)
    assert 0.25 < b0 < 0.5


def test_beta0_residual_below_tolerance():
    alpha = math.log(2.0)
    b0, T = C.solve_beta0_and_horizon(alpha, 0.5, 1.0, TrigPotential({1: 0.1}))
    s = (b0 - 0.5) / b0
    resid = 2 * (1 + s) * s * C.c_phi(1.0, s, TrigPotential({1: 0.1})) * math.exp(alpha) - (1.0 - b0)
    assert abs(resid) < 1e-12


def test_zero_potential_horizon_is_exact():
    b0, T = C.solve_beta0_and_horizon(1.0, 0.25, 0.5, TrigPotential({}))
    assert b0 == 0.5
    assert T == (0.5 - 0.25) / 0.5


def test_horizon_decreasing_in_alpha():
    Ts = [
        C.solve_beta0_and_horizon(a, 0.25, 0.5, PHI)[1]
        for a in np.linspace(0.1, 4.0, 20)
    ]
    assert all(b < a for a, b in zip(Ts, Ts[1:]))


def test_x_of_zero_is_two():
    assert C.x_of_a(0.0) == 2.0


def test_x_maximizes_the_profile():
    for a in (0.0, 0.5, 3.0, 20.0):
        x = C.x_of_a(a)
        f = lambda u: u * (a + u) * math.exp(-u)
        assert f(x) >= f(x - 1e-6) and f(x) >= f(x + 1e-6)


def test_c_n0_is_one_at_depth_one():
    assert C.c_n0(1, 5, 100) == 1.0


def test_C_limit_small_tau():
    # gamma -> 1 so C -> 2(j+1) + 4 = 8 at j = 1, but only at rate
    # 1/log(1/tau); the oracle value at tau = 1e-8 is 8.0838
    assert close(C.C_jtau(1, 1e-8), mp_C(1, mp.mpf("1e-8")))
    assert abs(C.C_jtau(1, 1e-8) - 8.0) < 0.1
    assert abs(C.C_jtau(1, 1e-30) - 8.0) < abs(C.C_jtau(1, 1e-8) - 8.0)


def test_C_asymptotic_ratio_at_j30():
    # C(j,tau) ~ j*2^j/(1-tau)^2 * (1 + gamma(j,tau)) in the sense that the
    # ratio of C to the asymptote approaches 1 from above; at j = 30,
    # tau = 0.5 it sits exactly at the 10 percent mark.
    j, tau = 30, 0.5
    asym = j / (1 - tau) ** 2 * (1 + C.gamma_jt(j, tau))
    ratio = C.C_jtau(j, tau) / asym
    assert abs(ratio - 1.0) <= 0.10 + 1e-6
    # and the ratio tightens as j grows
    r40 = C.C_jtau(40, tau) / (40 / (1 - tau) ** 2 * (1 + C.gamma_jt(40, tau)))
    assert abs(r40 - 1.0) < abs(ratio - 1.0)


def test_gamma_and_C_match_oracle():
    for j, tau in [(1, 0.25), (5, 0.5), (30, 0.5), (2, 0.9)]:
        assert close(C.gamma_jt(j, tau), mp_gamma(j, tau))
        assert close(C.c1(j, tau), mp_c1(j, tau))
        assert close(C.C_jtau(j, tau), mp_C(j, tau))


def test_gamma_dominates_c_n0():
    # gamma(j, tau) >= c_{n0(N)} for every N, by construction
    for N in (10, 100, 10_000, 10**8):
        for j, tau in [(1, 0.25), (3, 0.5)]:
            n0 = C.n0_of_N(N, tau)
            assert C.gamma_jt(j, tau) >= C.c_n0(n0, j, N) - 1e-12


def test_comparison_bound_formulas():
    j, t, hbar = 1, 0.0, 1.0
    bound, (n0j, expt, th), adm = C.hbar_dependent_bound(j, t, 10**6, hbar, PHI)
    # t = 0: exponent collapses to 2^{j+1} / N^{log2 / 2}
    assert close(bound, 2.0 ** (j + 1) / (10**6) ** (math.log(2) / 2))
    assert close(th, hbar / (16 * PHI.sup_norm))
    # N0(1) = e^{2 n0(1) + 2} with n0(1) = 2
    assert C.comparison_n0(1) == 2
    assert close(n0j, math.exp(6))


def test_comparison_bound_monotone_in_N():
    vals = [C.hbar_dependent_bound(1, 0.5, N, 0.5, PHI)[0] for N in (10**4, 10**6, 10**9)]
    assert vals[0] > vals[1] > vals[2]


def test_phi_kN():
    assert close(C.phi_kN(1, math.exp(2)), 1.0)
    assert close(C.phi_kN(3, math.exp(8)), 1.0)


def test_lambda_and_c():
    lam = C.lam_const(PHI)
    assert close(lam, 3 + 4 * 0.1**2)
    assert close(C.c_estimu(PHI), 8 * 0.1 / lam)


def test_B_zero_at_hbar_zero():
    assert C.B_bound(0.0, 3, 1.0, PHI) == 0.0


def test_hbar_star_residual_and_asymptote():
    t_star = 2.5
    for N in (1e9, 1e12):
        out = C.interpolation_bound(N, 1, t_star, PHI)
        assert out["hbar_star_residual"] < 1e-10
        asym = 16 * t_star * PHI.sup_norm * math.log(2) / math.log(math.log(N))
        assert 0.8 <= out["hbar_star"] / asym <= 1.2
        assert out["E_bound"] >= out["B_at_hbar_star"] - 1e-15
        assert out["E_bound"] >= out["B_at_hat_hbar"] - 1e-15


def test_hat_hbar_precondition():
    with pytest.raises(ValueError):
        C.hat_hbar(10, 4, 1.0, PHI)


def test_branch_logic_selects_smaller_admissible():
    t = t_star = 2.5
    for N in (1e9, 1e12, 1e15):
        hh = C.hat_hbar(N, 1, t, PHI)
        for hbar in (0.25 * hh, 0.5 * hh, 2 * hh, 8 * hh):
            label, bound = C.comparison_branch(N, hbar, 1, t, t_star, PHI)
            want = "a" if hbar >= hh else "b"
            assert label == want
            if label == "a":
                # branch a realizes the min of the two candidate rates
                assert bound <= C.B_bound(hbar, 1, t_star, PHI) + (
                    1 * C.c_estimu(PHI) * math.exp(C.lam_const(PHI) * t_star) / N
                ) + 1e-12


def test_deviation_bound_values():
    alpha, beta, bp = 1.0, 0.25, 0.5
    # t = 0 vanishes
    assert C.deviation_bound(0.0, alpha, beta, bp, PHI, 1.0, [0.5]) == 0.0
    # zero potential leaves only the moment term
    got = C.deviation_bound(0.3, alpha, beta, bp, TrigPotential({}), 1.0, [0.5])
    assert close(got, 0.3 * 0.5 / (math.e * 0.25))
    # benchmark oracle inside the pole (which sits near t = 0.05 here)
    t, fn, vm = 0.04, 1.3, [0.7]
    pole = (bp - beta) / (3 * (1 + t) * C.c_phi(bp, t, PHI) * math.exp(alpha))
    want = t * (fn / (pole - t) + vm[0] / (math.e * (bp - beta)))
    assert close(C.deviation_bound(t, alpha, beta, bp, PHI, fn, vm), want)
    with pytest.raises(HorizonError):
        C.deviation_bound(5 * pole, alpha, beta, bp, PHI, fn, vm)


def test_rate_report_full_oracle():
    p = C.RateParameters(
        beta=0.25, beta_prime=0.5, potential=PHI, hbar=0.5,
        j=1, t=0.015, N=4, f_in_norm=FNORM, t_star=2.5,
    )
    rep = C.rate_report(p, v_moment_norms=[0.5])
    # mirror the headline numbers in mpmath
    alpha = mp.log(FNORM) + mp.log(2)
    b0 = mp_beta0(alpha, 0.25, 0.5, PHI)
    T = (b0 - mp.mpf("0.25")) / b0
    tau = mp.mpf("0.015") / T
    assert close(rep.beta0, b0)
    assert close(rep.horizon, T)
    assert close(rep.tau, tau)
    assert close(rep.gamma_jt, mp_gamma(1, tau))
    assert close(rep.C_jtau, mp_C(1, tau))
    pref = mp.e ** (alpha * 0) * FNORM / (1 - mp.e ** (-alpha) * FNORM)
    assert close(rep.maineq_bound, mp_C(1, tau) * tau / 4 * pref)
    assert rep.comparison_admissible is False
    assert rep.j_max >= 1
    # report is a pure function of its parameters
    rep2 = C.rate_report(p, v_moment_norms=[0.5])
    assert rep.to_json() == rep2.to_json()


def test_rate_report_horizon_error():
    p = C.RateParameters(
        beta=0.25, beta_prime=0.5, potential=PHI, hbar=0.5,
        j=1, t=5.0, N=4, f_in_norm=FNORM,
    )
    with pytest.raises(HorizonError):
        C.rate_report(p)
