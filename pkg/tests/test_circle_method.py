"""Arc dissection, oscillatory model integrals, main term, exponent tables."""

import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest

from ps_lab.circle_method import (
    ArcParams,
    MainTermParams,
    build_major_arcs,
    c_range,
    j_vs_i_check,
    main_term,
    nu_of_k,
    osc_integral_I,
    osc_integral_J,
    two_t_table,
    v_approx,
)
from ps_lab.errors import ArcsOverlap, DomainError
from ps_lab.local_arith import gauss_power_sum
from ps_lab.primes import euler_phi

mp.mp.dps = 40


# ---------------------------------------------------------------------------
# Arc systems
# ---------------------------------------------------------------------------


def test_arc_count_is_totient_sum():
    for X, k, kappa in ((100, 3, 1.0), (1000, 4, 2.0), (100, 4, 0.5)):
        system = build_major_arcs(ArcParams(X=X, k=k, kappa=kappa))
        q_max = system.params.q_max
        assert q_max == int(math.log(X) ** kappa)
        assert len(system.arcs) == sum(euler_phi(q) for q in range(1, q_max + 1))


def test_arcs_are_sorted_disjoint_rationals():
    system = build_major_arcs(ArcParams(X=100, k=3, kappa=1.0))
    arcs = system.arcs
    for left, right in zip(arcs, arcs[1:]):
        assert left.upper < right.lower  # exact Fraction comparison
    assert system.total_measure == sum(2 * a.halfwidth for a in arcs)
    # widths scale like 1/q
    by_q = {a.q: a.halfwidth for a in arcs}
    assert by_q[4] == by_q[2] / 2


def test_overlapping_request_is_rejected():
    # Large kappa at tiny X makes neighbouring arcs collide.
    with pytest.raises((ArcsOverlap, DomainError)):
        build_major_arcs(ArcParams(X=10, k=1, kappa=2.0))


def test_locate_points():
    system = build_major_arcs(ArcParams(X=100, k=3, kappa=1.0))
    w = system.arcs[0].halfwidth  # narrowest-q reference width
    hit = system.locate(Fraction(1, 2) + Fraction(1, 10**9))
    assert hit is not None and (hit.a, hit.q) == (1, 2)
    # deep minor-arc point
    assert system.locate(Fraction(2, 7)) is None
    # the q=1 arc wraps the end of the unit interval
    hit = system.locate(Fraction(1, 1) - Fraction(1, 10**10))
    assert hit is not None and hit.q == 1


def test_arc_params_validation():
    with pytest.raises(DomainError):
        ArcParams(X=3, k=1, kappa=5.0)  # dissection wider than the circle
    with pytest.raises(DomainError):
        ArcParams(X=1, k=3, kappa=1.0)


# ---------------------------------------------------------------------------
# Oscillatory integrals
# ---------------------------------------------------------------------------


def test_I_at_zero_is_power_of_N():
    for N, k, d in ((1000, 3, 1 / 1.05), (100000, 4, 1 / 1.1)):
        beta = d / k
        got = osc_integral_I(0.0, N, k, d)
        assert abs(got - N**beta) < 1e-9 * N**beta


def test_I_linear_phase_closed_form():
    # k = 1, delta = 1: plain Fourier kernel with explicit antiderivative.
    z, N = 0.37, 50
    got = osc_integral_I(z, N, 1, 1.0)
    closed = (np.exp(2j * np.pi * z * N) - 1.0) / (2j * np.pi * z)
    assert abs(got - closed) < 1e-8


def test_I_conjugate_symmetry():
    a = osc_integral_I(0.003, 10000, 3, 1 / 1.05)
    b = osc_integral_I(-0.003, 10000, 3, 1 / 1.05)
    assert abs(a - np.conj(b)) < 1e-12


def test_I_against_incomplete_gamma():
    for z, N, k, d in ((0.25, 1000, 3, 1 / 1.05), (-0.01, 10000, 4, 1 / 1.1)):
        beta = d / k
        got = osc_integral_I(z, N, k, d)
        s = 2j * mp.pi * z
        want = complex(beta * (-s) ** (-mp.mpf(beta)) * mp.gammainc(mp.mpf(beta), 0, -s * N))
        assert abs(got - want) / abs(want) < 1e-8, (z, N)


def test_I_stationary_free_decay_bound():
    for z in (1e-4, 1e-2, 0.5, 5.0, 20.0):
        for N in (1000, 100000):
            d = 1 / 1.05
            v = abs(osc_integral_I(z, N, 3, d))
            assert v <= 2.0 * min(N ** (d / 3), z ** (-d / 3)), (z, N)


def test_J_at_zero_is_log_integral_difference():
    for N, k, d in ((10000, 3, 1 / 1.05), (100000, 4, 1 / 1.1)):
        beta = d / k
        got = osc_integral_J(0.0, N, k, d)
        want = float(d * (mp.li(mp.mpf(N) ** beta) - mp.li(mp.mpf(2) ** d)))
        assert abs(got - want) < 1e-10 * abs(want)


def test_J_smaller_than_I_at_zero():
    assert osc_integral_J(0.0, 10000, 3, 1 / 1.05).real < osc_integral_I(0.0, 10000, 3, 1 / 1.05).real


def test_J_close_to_I_over_log():
    # frozen ratios of |J - I/L| to its two-term budget, constant 1
    for (z, N), frozen in (((0.0, 10000), 0.4019), ((1e-4, 10000), 0.3356), ((1e-3, 100000), 0.5788)):
        r = j_vs_i_check(z, N, 3, 1 / 1.05, 1.0)
        assert r.ratio < 1.0
        assert abs(r.ratio - frozen) < 0.05 * frozen, (z, N)


def test_J_domain():
    with pytest.raises(DomainError):
        osc_integral_J(0.0, 8, 3, 1 / 1.05)  # needs N > 2^k


# ---------------------------------------------------------------------------
# Model value v and the main term
# ---------------------------------------------------------------------------


def test_v_equals_J_on_the_rational():
    got = v_approx(Fraction(1, 10), 1, 10, 100000, 3, 1 / 1.05)
    S = gauss_power_sum(1, 10, 3)
    want = S / euler_phi(10) * osc_integral_J(0.0, 100000, 3, 1 / 1.05)
    assert abs(got - want) < 1e-9 * abs(want)


def test_v_offset_is_centered_across_wrap():
    # Just below 1 the offset to a/q = 1/1 must be a small negative number,
    # not -1 + epsilon; the two sides come out conjugate.
    lo = v_approx(Fraction(1) - Fraction(1, 10**6), 1, 1, 100000, 3, 1 / 1.05)
    hi = v_approx(Fraction(1) + Fraction(1, 10**6), 1, 1, 100000, 3, 1 / 1.05)
    assert abs(lo - np.conj(hi)) < 1e-9 * abs(hi)
    assert abs(hi) > 0.1  # sanity: same order as J(0), not a wrapped blowup


def test_main_term_positive_on_odd_targets():
    for N, frozen in (
        (33333, 9390.57284282107),
        (50001, 4712.442477835091),
        (99991, 35587.406387982315),
        (99999, 2567.181013147359),
        (100001, 13882.193609460404),
    ):
        p = MainTermParams(N=N, s=9, k=3, c="1.01")
        got = main_term(p, 50)
        assert got > 0.0
        assert abs(got - frozen) < 1e-9 * frozen, N


def test_main_term_grows_in_N():
    # s = 5, k = 1, c = 1: the prediction rises steeply while N^(s-1) terms
    # still fight the log^s denominator.
    vals = [main_term(MainTermParams(N=N, s=5, k=1, c="1"), 30) for N in (200, 400, 800, 1600)]
    assert all(v > 0 for v in vals)
    assert vals == sorted(vals)


def test_main_term_params_validation():
    with pytest.raises(DomainError):
        MainTermParams(N=1000, s=4, k=3, c="1.5")  # s below max(5, k+1)
    with pytest.raises(DomainError):
        MainTermParams(N=1000, s=9, k=3, c="2")
    p = MainTermParams(N=1000, s=9, k=3, c="1")  # c = 1 allowed here
    assert p.delta == Fraction(1)


# ---------------------------------------------------------------------------
# Exponent bookkeeping tables
# ---------------------------------------------------------------------------


def ceil_frac(num: int, den: int) -> int:
    return -((-num) // den)


def brute_two_t(k: int) -> int:
    best = max(ceil_frac(s * (k - s - 1), k - s + 1) for s in range(1, k + 1))
    need = k * k + 1 - best
    return need + (need % 2)


def test_two_t_frozen_table():
    assert [two_t_table(k) for k in range(3, 13)] == [8, 16, 24, 34, 48, 62, 78, 98, 118, 142]


def test_two_t_formula_branch():
    assert two_t_table(20) == 392
    for k in range(13, 26):
        assert two_t_table(k) == brute_two_t(k), k
    with pytest.raises(DomainError):
        two_t_table(2)


def test_nu_values_and_divisibility():
    assert nu_of_k(4) == 100
    assert nu_of_k(11) == 11 * 12**2
    assert nu_of_k(12) == 1938
    assert nu_of_k(13) == 2280
    for k in range(12, 31):
        m = 3 * k // 2
        assert (2 * m * (m * m - 1)) % (m - k) == 0, k
        assert nu_of_k(k) == 2 * m * (m * m - 1) // (m - k)
    with pytest.raises(DomainError):
        nu_of_k(3)


def test_c_range_exact_rationals():
    lo, hi = c_range(3, 9, 4)
    assert lo == Fraction(1)
    assert hi == 1 + Fraction(3, 1331)
    lo, hi = c_range(4, 17, 8)
    assert hi == 1 + Fraction(1, 99 * 17 + 2 * 8 * 100)
    with pytest.raises(DomainError):
        c_range(3, 8, 4)  # s = 2t leaves an empty interval
