"""Exact ground-truth counting: ordered representations N = p_1^k + ... + p_s^k
by constrained primes, even-moment Diophantine counts, and the comparison of
exact counts against the analytic main term.

Counting is done twice where it matters: a layered dynamic program (shifted
adds over a dense table) and an independent meet-in-the-middle hash join.
Both produce exact integers with explicit overflow headroom checks -- the
code fails loudly rather than wrapping.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from .errors import BudgetExceeded, DomainError, GridTooSmallWarning
from .expsums import AlphaLike, as_phase_fraction
from .local_arith import modulus_K, S_m_of_q
from .ps_core import PSParams, enumerate_ps_primes
from .special import gamma

_INT64_HEADROOM = 2**62


@dataclass(frozen=True)
class RepCountTable:
    k: int
    s: int
    c: Fraction
    window: tuple[int, int]  # (lo, hi], half-open
    counts: Mapping[int, int]
    main_terms: Mapping[int, float]


@dataclass(frozen=True)
class MomentCount:
    k: int
    t: int
    X: int
    count: int

    def __post_init__(self):
        # Ordered diagonal solutions (right side equal to left side termwise)
        # alone contribute X^t.
        if self.count < self.X**self.t:
            raise DomainError(
                f"moment count {self.count} below the diagonal floor {self.X ** self.t}"
            )


def _power_list(N: int, k: int, params: PSParams) -> list[int]:
    """k-th powers of the constrained primes not exceeding N, ascending."""
    if N < 2**k:
        return []
    root = int(round(N ** (1.0 / k)))
    while root**k > N:
        root -= 1
    while (root + 1) ** k <= N:
        root += 1
    return [p**k for p in enumerate_ps_primes(root, params)]


def dp_count_array(N_max: int, s: int, k: int, params: PSParams) -> np.ndarray:
    """R(N) for every N <= N_max at once, by s-1 layers of shifted adds.

    Entry N holds the number of ordered s-tuples of constrained primes whose
    k-th powers sum to N.  Desk budget: s <= 12, N_max <= 10^7.
    """
    if s < 1:
        raise DomainError(f"need s >= 1, got {s}")
    if s > 12 or N_max > 10**7:
        raise BudgetExceeded(
            f"representation count budget is s <= 12, N <= 1e7; got s={s}, N={N_max}"
        )
    powers = _power_list(N_max, k, params)
    layer = np.zeros(N_max + 1, dtype=np.int64)
    for P in powers:
        layer[P] = 1
    for _ in range(s - 1):
        if powers and layer.max() >= _INT64_HEADROOM // max(len(powers), 1):
            raise BudgetExceeded("representation counts would overflow int64")
        nxt = np.zeros(N_max + 1, dtype=np.int64)
        for P in powers:
            nxt[P:] += layer[: N_max + 1 - P]
        layer = nxt
    return layer


def mitm_count_array(N_max: int, s: int, k: int, params: PSParams) -> np.ndarray:
    """Same table as dp_count_array via meet-in-the-middle hash join.

    The s-fold sum is split s = t1 + t2; each half's distribution of sums is
    built as a sparse histogram, and the join accumulates products into a
    dense table.  Independent of the DP path on purpose.
    """
    if s < 1:
        raise DomainError(f"need s >= 1, got {s}")
    if s > 12 or N_max > 10**7:
        raise BudgetExceeded(
            f"representation count budget is s <= 12, N <= 1e7; got s={s}, N={N_max}"
        )
    powers = _power_list(N_max, k, params)
    t1 = s // 2
    t2 = s - t1

    def fold(t: int) -> dict[int, int]:
        sums = {0: 1}
        for _ in range(t):
            nxt: dict[int, int] = {}
            for v, m in sums.items():
                for P in powers:
                    w = v + P
                    if w <= N_max:
                        nxt[w] = nxt.get(w, 0) + m
            sums = nxt
        return sums

    left = fold(t1)
    right = fold(t2)
    out = np.zeros(N_max + 1, dtype=np.int64)
    if not right:
        return out
    rv = np.array(sorted(right), dtype=np.int64)
    rm = np.array([right[int(v)] for v in rv], dtype=np.int64)
    for v, m in sorted(left.items()):
        mask_hi = np.searchsorted(rv, N_max - v, side="right")
        # indices v + rv[:mask_hi] are distinct, so a plain fancy add is exact
        out[v + rv[:mask_hi]] += m * rm[:mask_hi]
    return out


def count_representations(N: int, s: int, k: int, params: PSParams) -> int:
    """Number of ordered s-tuples of constrained primes with sum of k-th
    powers equal to N (the quantity the circle integral computes)."""
    if N < 1:
        raise DomainError(f"need N >= 1, got {N}")
    return int(dp_count_array(N, s, k, params)[N])


# ---------------------------------------------------------------------------
# Even moments as Diophantine counts
# ---------------------------------------------------------------------------

_MOMENT_MAX_T = 4
_MOMENT_MAX_LEN = 8 * 10**7


def _fold_histogram(pk: np.ndarray, t: int) -> np.ndarray:
    """Dense histogram of t-fold sums of entries of pk (with multiplicity)."""
    top = int(t * pk[-1])
    if t == 1:
        return np.bincount(pk, minlength=top + 1)
    half = _fold_histogram(pk, t // 2)
    other = _fold_histogram(pk, t - t // 2)
    vs = np.nonzero(half)[0]
    ms = half[vs]
    wv = np.nonzero(other)[0]
    wm = other[wv]
    out = np.zeros(top + 1, dtype=np.int64)
    # every joined entry is bounded by the product of the two totals
    if int(half.sum()) * int(other.sum()) >= _INT64_HEADROOM:
        raise BudgetExceeded("moment histogram would overflow int64")
    for v, m in zip(vs.tolist(), ms.tolist()):
        # v + wv are distinct indices: plain fancy add, no np.add.at needed
        out[v + wv] += m * wm
    return out


def moment_count(t: int, k: int, X: int) -> MomentCount:
    """Exact count of 2t-tuples with n_1^k+...+n_t^k = n_{t+1}^k+...+n_{2t}^k,
    all n_i in [1, X]; equals the mean of |weyl_sum|^{2t} over a full period.
    """
    if t < 1 or k < 1 or X < 1:
        raise DomainError(f"need t, k, X >= 1; got t={t}, k={k}, X={X}")
    if t > _MOMENT_MAX_T or 2 * t * X**k > _MOMENT_MAX_LEN:
        raise BudgetExceeded(
            f"moment budget is t <= {_MOMENT_MAX_T} and 2 t X^k <= {_MOMENT_MAX_LEN}"
        )
    pk = np.array([n**k for n in range(1, X + 1)], dtype=np.int64)
    hist = _fold_histogram(pk, t)
    # sum of squares <= max * total, both known exactly here
    if int(hist.max()) * int(hist.sum()) >= _INT64_HEADROOM:
        raise BudgetExceeded("moment sum of squares would overflow int64")
    count = int(np.dot(hist, hist))
    return MomentCount(k=k, t=t, X=X, count=count)


def quadrature_vs_count(t: int, k: int, X: int, M: int) -> float:
    """Relative gap between the Riemann-grid moment and the exact count.

    Evaluates (1/M) sum over j < M of |weyl_sum(j/M, k, X)|^{2t} via an FFT
    of the residue histogram of n^k mod M, and compares with moment_count.
    Exact (to rounding) once M >= 2 t X^k + 1; below that a
    GridTooSmallWarning is issued and the gap is whatever it is.
    """
    if M < 2:
        raise DomainError(f"need M >= 2, got {M}")
    exact = moment_count(t, k, X).count
    if M < 2 * t * X**k + 1:
        warnings.warn(
            f"M={M} below the exactness threshold {2 * t * X ** k + 1}; "
            "the grid moment is only an approximation",
            GridTooSmallWarning,
        )
    res = np.array([pow(n, k, M) for n in range(1, X + 1)], dtype=np.int64)
    hist = np.bincount(res, minlength=M).astype(np.float64)
    w = np.fft.fft(hist)  # w[j] = sum_n e(-j n^k / M); |.| is what we need
    grid_moment = float(np.mean(np.abs(w) ** (2 * t)))
    return abs(grid_moment - exact) / exact


# ---------------------------------------------------------------------------
# Exact counts against the analytic main term
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CompareReport:
    table: RepCountTable
    modulus: int  # K(k)
    residue: int  # s mod K(k): the admissible class
    n_admissible: int
    mean_ratio: float
    mean_ratio_low_half: float
    mean_ratio_high_half: float
    concentration: float  # share of all representations in the class


def _sing_series_lookup(s: int, k: int, Q: int) -> dict[int, np.ndarray]:
    """T_q[r] = sum over coprime a of (S(a,q)/phi(q))^s e(-ra/q), per q <= Q.

    The truncated singular series of any m is then sum_q T_q[m mod q]; this
    reproduces singular_series(m, s, k, Q).partial_sum exactly (same terms,
    grouped by residue instead of by m).
    """
    out: dict[int, np.ndarray] = {}
    for q in range(1, Q + 1):
        col = np.array([S_m_of_q(r, q, s, k) for r in range(q)])
        out[q] = col
    return out


def compare_to_main_term(
    window: tuple[int, int], s: int, k: int, c: AlphaLike, Q: int
) -> CompareReport:
    """Exact ordered counts vs the main term across a window of N.

    window = (lo, hi] half-open.  The ratio statistics run over the
    admissible class N = s mod K(k) (the class where the local factors do
    not degenerate); the concentration statistic reports how much of the
    total representation mass that class carries.
    """
    lo, hi = window
    if not 1 <= lo < hi:
        raise DomainError(f"bad window {window}")
    cf = as_phase_fraction(c)
    params = PSParams(cf)
    counts_all = dp_count_array(hi, s, k, params)
    K = modulus_K(k)
    residue = s % K
    lookup = _sing_series_lookup(s, k, Q)

    ck = float(cf) * k
    gamma_factor = gamma(1.0 + 1.0 / ck) ** s / gamma(s / ck)
    Ns = np.arange(lo + 1, hi + 1, dtype=np.int64)
    admissible = Ns[Ns % K == residue]
    sing = np.zeros(len(admissible))
    for q, col in lookup.items():
        sing += col[np.mod(admissible, q)]
    L = np.log(admissible.astype(np.float64)) / k
    mains = (
        sing
        * admissible.astype(np.float64) ** (s / ck - 1.0)
        * gamma_factor
        / L**s
    )

    cnt_adm = counts_all[admissible].astype(np.float64)
    ratios = np.divide(
        cnt_adm, mains, out=np.full(len(mains), np.nan), where=mains != 0
    )
    ok = ~np.isnan(ratios)
    mean_ratio = float(np.mean(ratios[ok])) if ok.any() else float("nan")
    half = len(ratios) // 2
    lo_ok, hi_ok = ok[:half], ok[half:]
    mean_lo = float(np.mean(ratios[:half][lo_ok])) if lo_ok.any() else float("nan")
    mean_hi = float(np.mean(ratios[half:][hi_ok])) if hi_ok.any() else float("nan")

    total = int(counts_all[lo + 1 :].sum())
    in_class = int(counts_all[admissible].sum())
    concentration = in_class / total if total else float("nan")

    counts_map = {int(n): int(counts_all[n]) for n in admissible}
    mains_map = {int(n): float(m) for n, m in zip(admissible.tolist(), mains)}
    table = RepCountTable(
        k=k, s=s, c=cf, window=(lo, hi), counts=counts_map, main_terms=mains_map
    )
    return CompareReport(
        table=table,
        modulus=K,
        residue=residue,
        n_admissible=len(admissible),
        mean_ratio=mean_ratio,
        mean_ratio_low_half=mean_lo,
        mean_ratio_high_half=mean_hi,
        concentration=concentration,
    )
