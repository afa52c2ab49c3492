"""Exact representation counts: two independent algorithms plus brute force."""

import itertools
import math

import numpy as np
import pytest

from ps_lab.errors import BudgetExceeded, DomainError, GridTooSmallWarning
from ps_lab.ps_core import PSParams, enumerate_ps_primes
from ps_lab.repcount import (
    MomentCount,
    compare_to_main_term,
    count_representations,
    dp_count_array,
    mitm_count_array,
    moment_count,
    quadrature_vs_count,
)


def brute_count(N: int, s: int, k: int, params: PSParams) -> int:
    lim = int(round(N ** (1.0 / k))) + 2
    powers = [p**k for p in enumerate_ps_primes(lim, params) if p**k <= N]
    return sum(1 for combo in itertools.product(powers, repeat=s) if sum(combo) == N)


def test_brute_force_triples():
    params = PSParams("1.5")
    for N in range(1, 301):
        assert count_representations(N, 3, 3, params) == brute_count(N, 3, 3, params), N


def test_brute_force_quadruples_spot():
    params = PSParams("1.5")
    for N in (4, 32, 157, 641, 1100, 1987):
        assert count_representations(N, 4, 3, params) == brute_count(N, 4, 3, params), N


def test_single_power_counts():
    # c = 3/2 primes in the sequence up to 11 are 2, 5, 11; only their cubes
    # are represented with s = 1.
    params = PSParams("1.5")
    cubes = {8, 125, 1331}
    for N in list(range(1, 30)) + [125, 126, 512, 1331, 1400]:
        assert count_representations(N, 1, 3, params) == (1 if N in cubes else 0)


def test_frozen_pair_counts():
    params = PSParams("1.5")
    assert count_representations(16, 2, 3, params) == 1  # 8 + 8
    assert count_representations(133, 2, 3, params) == 2  # 8 + 125, both orders


def test_dp_equals_mitm():
    params = PSParams("1.5")
    for s in (2, 3, 4, 5):
        a = dp_count_array(3000, s, 3, params)
        b = mitm_count_array(3000, s, 3, params)
        assert np.array_equal(a, b), s


def test_dp_budget_guard():
    with pytest.raises(BudgetExceeded):
        dp_count_array(100, 13, 3, PSParams("1.5"))


# ---------------------------------------------------------------------------
# Even moments as lattice counts
# ---------------------------------------------------------------------------


def brute_moment(t: int, k: int, X: int) -> int:
    pk = [n**k for n in range(1, X + 1)]
    hits = 0
    for left in itertools.product(pk, repeat=t):
        target = sum(left)
        for right in itertools.product(pk, repeat=t):
            hits += sum(right) == target
    return hits


def test_moment_count_brute_force():
    assert moment_count(2, 3, 10).count == brute_moment(2, 3, 10) == 190
    assert moment_count(2, 3, 12).count == brute_moment(2, 3, 12) == 284
    assert moment_count(2, 2, 8).count == brute_moment(2, 2, 8)


def test_moment_diagonal_case():
    for X in (1, 5, 17):
        assert moment_count(1, 3, X).count == X


def test_moment_monotone_in_X():
    counts = [moment_count(2, 3, X).count for X in (10, 11, 12, 13)]
    assert counts == sorted(counts)
    assert counts[0] == 190 and counts[2] == 284


def test_moment_growth_exponent_stays_subcritical():
    # log-slope of the 8th moment (t=4) of the cubic sum: frozen 5.066 at
    # X=50 and 5.028 at X=100, both safely below 5.5.
    for X, frozen in ((50, 5.0656), (100, 5.0283)):
        c = moment_count(4, 3, X).count
        slope = math.log(c) / math.log(X)
        assert abs(slope - frozen) < 1e-3
        assert slope < 5.5


def test_moment_budget_guard():
    with pytest.raises(BudgetExceeded):
        moment_count(5, 3, 10)


def test_moment_record_rejects_impossible_count():
    with pytest.raises(DomainError):
        MomentCount(t=2, k=3, X=10, count=50)  # below the diagonal X^t


def test_quadrature_exact_when_grid_resolves():
    # M >= 2 t X^k + 1 makes the DFT moment an exact lattice count (up to
    # float noise in the transform itself).
    assert quadrature_vs_count(2, 3, 6, 2 * 2 * 216 + 1) < 1e-12
    assert quadrature_vs_count(1, 3, 10, 2001) < 1e-12


def test_quadrature_warns_below_resolution():
    with pytest.warns(GridTooSmallWarning):
        rel = quadrature_vs_count(2, 3, 10, 97)
    assert rel >= 0.0


# ---------------------------------------------------------------------------
# Counts against the analytic prediction
# ---------------------------------------------------------------------------


def test_compare_small_window_structure():
    rep = compare_to_main_term((1000, 2000), 5, 3, "1.1", 20)
    assert rep.modulus == 2 and rep.residue == 1
    assert rep.n_admissible == 500
    assert set(rep.table.counts) == {n for n in range(1001, 2001) if n % 2 == 1}
    assert 0.0 < rep.concentration < 1.0
    # frozen regression values for this configuration
    assert abs(rep.mean_ratio - 1.2243909713139376) < 1e-9
    assert abs(rep.mean_ratio_low_half - 0.3525771729751349) < 1e-9
    assert abs(rep.mean_ratio_high_half - 2.09620476965274) < 1e-9
    assert abs(rep.concentration - 0.5148895292987512) < 1e-9


def test_compare_counts_match_dp():
    rep = compare_to_main_term((1000, 2000), 5, 3, "1.1", 20)
    arr = dp_count_array(2000, 5, 3, PSParams("1.1"))
    for n, cnt in rep.table.counts.items():
        assert cnt == int(arr[n]), n


def test_compare_window_validation():
    with pytest.raises(DomainError):
        compare_to_main_term((2000, 1000), 5, 3, "1.1", 20)
