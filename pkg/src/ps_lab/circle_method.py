"""Arc systems, the archimedean integrals I/J/v, the main-term formula, and
the exponent bookkeeping (moment exponents, nu, admissible c-range).

Arc endpoints are exact rationals: the real scale factor log(X)^kappa is
rounded *once* downward to a dyadic rational with 48 fractional bits and all
further arithmetic (centers, halfwidths, disjointness, measure) is exact in
Fraction.  Disjointness is therefore an assertable statement, not a float
comparison.

The integrals use the shared linear-phase machinery: substituting y = x^k
turns e(z x^k) into e(z y) at the cost of an integrable y^(beta-1) endpoint
singularity (beta = delta/k), which the quadrature engine removes with a
dedicated w = y^beta head panel.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import primes
from .errors import ArcsOverlap, DomainError
from .expsums import AlphaLike, as_phase_fraction
from .local_arith import gauss_power_sum, singular_series
from .quadrature import adaptive_gk, oscillatory_integral
from .special import gamma

# The one float -> rational rounding step for arc geometry.
HALFWIDTH_SCALE_BITS = 48


def _scale_rational(L: float, kappa: float) -> Fraction:
    """log(X)^kappa rounded once down to a multiple of 2^-48."""
    w = L**kappa
    return Fraction(math.floor(w * 2**HALFWIDTH_SCALE_BITS), 2**HALFWIDTH_SCALE_BITS)


@dataclass(frozen=True)
class ArcParams:
    """Geometry inputs: denominators run to log(X)^kappa, widths shrink
    like log(X)^kappa / (q X^k)."""

    X: int
    k: int
    kappa: float

    def __post_init__(self):
        if self.X < 2:
            raise DomainError(f"ArcParams needs X >= 2, got {self.X}")
        if self.k < 1:
            raise DomainError(f"ArcParams needs k >= 1, got {self.k}")
        if not self.kappa > 0:
            raise DomainError(f"ArcParams needs kappa > 0, got {self.kappa}")
        if self.L**self.kappa >= self.X**self.k / 2:
            raise DomainError(
                "arc scale log(X)^kappa must stay below X^k / 2 so the arcs "
                "fit inside the unit interval"
            )

    @property
    def L(self) -> float:
        return math.log(self.X)

    @property
    def scale(self) -> Fraction:
        """Exact rational standing in for log(X)^kappa in all geometry."""
        return _scale_rational(self.L, self.kappa)

    @property
    def q_max(self) -> int:
        return int(self.L**self.kappa)


@dataclass(frozen=True)
class Arc:
    """One interval |alpha - a/q| <= halfwidth with exact endpoints."""

    a: int
    q: int
    center: Fraction
    halfwidth: Fraction

    @property
    def lower(self) -> Fraction:
        return self.center - self.halfwidth

    @property
    def upper(self) -> Fraction:
        return self.center + self.halfwidth


@dataclass(frozen=True)
class ArcSystem:
    params: ArcParams
    arcs: tuple[Arc, ...]  # sorted by center; last one is centered at 1

    @property
    def unit_interval(self) -> tuple[Fraction, Fraction]:
        """(w, 1 + w] with w = scale / X^k; the q=1 arc wraps across 1."""
        w = self.params.scale / self.params.X**self.params.k
        return (w, 1 + w)

    @property
    def total_measure(self) -> Fraction:
        return sum((2 * arc.halfwidth for arc in self.arcs), Fraction(0))

    def locate(self, alpha: AlphaLike) -> Optional[Arc]:
        """The arc containing alpha (mod 1), or None if alpha is minor."""
        x = as_phase_fraction(alpha) % 1
        centers = [arc.center for arc in self.arcs]
        for cand in (x, x + 1):
            i = bisect_left(centers, cand)
            for j in (i - 1, i):
                if 0 <= j < len(self.arcs):
                    arc = self.arcs[j]
                    if abs(cand - arc.center) <= arc.halfwidth:
                        return arc
        return None


def build_major_arcs(params: ArcParams) -> ArcSystem:
    """All arcs (a, q), q <= scale, gcd(a, q) = 1, with exact disjointness.

    Raises ArcsOverlap if any two arcs intersect (closed intervals, exact
    rational comparison, including the wrap of the (1,1) arc across 0/1).
    """
    W = params.scale
    Xk = params.X**params.k
    arcs: list[Arc] = []
    for q in range(1, params.q_max + 1):
        hw = W / (q * Xk)
        for a in range(1, q + 1):
            if math.gcd(a, q) == 1:
                arcs.append(Arc(a=a, q=q, center=Fraction(a, q), halfwidth=hw))
    arcs.sort(key=lambda arc: arc.center)
    for left, right in zip(arcs, arcs[1:]):
        if left.upper >= right.lower:
            raise ArcsOverlap(
                f"arcs ({left.a},{left.q}) and ({right.a},{right.q}) intersect"
            )
    if len(arcs) > 1:
        # (1,1) wraps: its image (upper - 1) must stay below the first arc.
        if arcs[-1].upper - 1 >= arcs[0].lower:
            raise ArcsOverlap(
                f"arc (1,1) wraps onto ({arcs[0].a},{arcs[0].q})"
            )
    return ArcSystem(params=params, arcs=tuple(arcs))


# ---------------------------------------------------------------------------
# Archimedean integrals
# ---------------------------------------------------------------------------


def osc_integral_I(
    z: float, N: int, k: int, delta: float, tol: float | None = None
) -> complex:
    """integral over x in (0, N^(1/k)] of delta x^(delta-1) e(z x^k) dx.

    Computed after y = x^k as integral of (delta/k) y^(beta-1) e(z y) dy over
    (0, N], beta = delta/k.  At z = 0 the value is N^beta exactly.  Default
    absolute error target is 1e-9 * N^beta.
    """
    if N < 2:
        raise DomainError(f"osc_integral_I needs N >= 2, got {N}")
    if k < 1:
        raise DomainError(f"osc_integral_I needs k >= 1, got {k}")
    if not 0.5 < delta <= 1.0:
        raise DomainError(f"osc_integral_I needs delta in (1/2, 1], got {delta}")
    beta = delta / k
    if tol is None:
        tol = 1e-9 * N**beta
    if z == 0.0:
        return complex(N**beta)

    def amp(y: np.ndarray) -> np.ndarray:
        return beta * y ** (beta - 1.0)

    def smooth(y: np.ndarray) -> np.ndarray:
        return np.full_like(np.asarray(y, dtype=np.float64), beta)

    return oscillatory_integral(
        amp, 0.0, float(N), z, tol, singular_beta=beta, smooth_factor=smooth
    )


def osc_integral_J(
    z: float, N: int, k: int, delta: float, tol: float | None = None
) -> complex:
    """integral over x in [2, N^(1/k)] of delta x^(delta-1) e(z x^k) / log x dx.

    Same y = x^k substitution: amplitude delta y^(beta-1) / log y on [2^k, N].
    No endpoint singularity (log y >= k log 2).  Real at z = 0.
    """
    if k < 1:
        raise DomainError(f"osc_integral_J needs k >= 1, got {k}")
    if N <= 2**k:
        raise DomainError(f"osc_integral_J needs N > 2^k, got N={N}, k={k}")
    if not 0.5 < delta <= 1.0:
        raise DomainError(f"osc_integral_J needs delta in (1/2, 1], got {delta}")
    beta = delta / k
    if tol is None:
        tol = 1e-9 * N**beta
    lo = float(2**k)
    if z == 0.0:
        # After w = y^beta this is delta * integral of dw/log(w) over
        # [2^delta, N^beta]: smooth, monotone, cheap.
        def f(w: np.ndarray) -> np.ndarray:
            return 1.0 / np.log(w) + 0j

        v, _ = adaptive_gk(f, 2.0**delta, N**beta, tol / delta)
        return complex(delta * v.real)

    def amp(y: np.ndarray) -> np.ndarray:
        return delta * y ** (beta - 1.0) / np.log(y)

    return oscillatory_integral(amp, lo, float(N), z, tol)


@dataclass(frozen=True)
class JvsIReport:
    """|J(z) - I(z)/log(N^(1/k))| against its two-term budget."""

    z: float
    N: int
    k: int
    delta: float
    kappa: float
    lhs: float
    rhs: float

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs


def j_vs_i_check(z: float, N: int, k: int, delta: float, kappa: float) -> JvsIReport:
    """Compare J(z) with I(z)/log(N^(1/k)).

    The budget is N^(beta)/L^(kappa+2) + min(N^beta, |z|^-beta) loglog(N)/L^2
    with L = log(N^(1/k)); the ratio is reported with constant 1 -- a fitted
    constant is the caller's business.
    """
    beta = delta / k
    L = math.log(N) / k
    jv = osc_integral_J(z, N, k, delta)
    iv = osc_integral_I(z, N, k, delta)
    lhs = abs(jv - iv / L)
    osc_part = N**beta if z == 0.0 else min(N**beta, abs(z) ** -beta)
    rhs = N**beta / L ** (kappa + 2) + osc_part * math.log(math.log(N)) / L**2
    return JvsIReport(z=z, N=N, k=k, delta=delta, kappa=kappa, lhs=lhs, rhs=rhs)


def v_approx(
    alpha: AlphaLike, a: int, q: int, N: int, k: int, delta: float
) -> complex:
    """Major-arc model of the weighted sum: S(a,q)/phi(q) * J(alpha - a/q).

    Meaningful when alpha lies in the arc at a/q; the offset alpha - a/q is
    formed exactly before conversion to float.
    """
    if q < 1 or not 1 <= a <= q or math.gcd(a, q) != 1:
        raise DomainError(f"need 1 <= a <= q, gcd(a,q)=1; got a={a}, q={q}")
    off = (as_phase_fraction(alpha) - Fraction(a, q)) % 1
    if off > Fraction(1, 2):
        off -= 1  # centered residue: the (1,1) arc wraps across 0/1
    s = gauss_power_sum(a, q, k)
    return s / primes.euler_phi(q) * osc_integral_J(float(off), N, k, delta)


# ---------------------------------------------------------------------------
# Main term and exponent bookkeeping
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MainTermParams:
    N: int
    s: int
    k: int
    c: Fraction

    def __init__(self, N: int, s: int, k: int, c: AlphaLike):
        object.__setattr__(self, "N", int(N))
        object.__setattr__(self, "s", int(s))
        object.__setattr__(self, "k", int(k))
        object.__setattr__(self, "c", as_phase_fraction(c))
        if self.N < 3:
            raise DomainError(f"main term needs N >= 3, got {N}")
        if self.k < 1:
            raise DomainError(f"main term needs k >= 1, got {k}")
        if self.s < max(5, self.k + 1):
            raise DomainError(
                f"main term needs s >= max(5, k+1) = {max(5, self.k + 1)}, got {s}"
            )
        if not 1 <= self.c < 2:
            raise DomainError(f"main term needs 1 <= c < 2, got {c}")

    @property
    def delta(self) -> Fraction:
        return 1 / self.c


def main_term(p: MainTermParams, Q: int) -> float:
    """Singular series (truncated at Q) times the archimedean shape:

        S_Q(N) * N^(s/(ck)-1) * Gamma(1 + 1/(ck))^s / Gamma(s/(ck))
              / (log N^(1/k))^s
    """
    ss = singular_series(p.N, p.s, p.k, Q)
    ck = float(p.c) * p.k
    L = math.log(p.N) / p.k
    return (
        ss.partial_sum
        * p.N ** (p.s / ck - 1.0)
        * gamma(1.0 + 1.0 / ck) ** p.s
        / gamma(p.s / ck)
        / L**p.s
    )


_TWO_T_TABLE = {
    3: 8,
    4: 16,
    5: 24,
    6: 34,
    7: 48,
    8: 62,
    9: 78,
    10: 98,
    11: 118,
    12: 142,
}


def two_t_table(k: int) -> int:
    """Smallest admissible even moment exponent 2t for the k-th powers.

    Tabulated for 3 <= k <= 12; for k > 12 it is the smallest even integer
    at least k^2 + 1 - max over 1 <= s <= k of ceil(s(k-s-1)/(k-s+1)).
    """
    if k < 3:
        raise DomainError(f"two_t_table needs k >= 3, got {k}")
    if k <= 12:
        return _TWO_T_TABLE[k]
    best = max(-(-(s * (k - s - 1)) // (k - s + 1)) for s in range(1, k + 1))
    val = k * k + 1 - best
    return val if val % 2 == 0 else val + 1


def nu_of_k(k: int) -> int:
    """The exponent-pair-driven parameter: k(k+1)^2 for 4 <= k <= 11, and
    2 m (m^2 - 1)/(m - k) with m = floor(3k/2) for k >= 12 (exact integer)."""
    if k < 4:
        raise DomainError(f"nu_of_k needs k >= 4, got {k}")
    if k <= 11:
        return k * (k + 1) ** 2
    m = 3 * k // 2
    num = 2 * m * (m * m - 1)
    quot, rem = divmod(num, m - k)
    if rem:
        raise DomainError(f"nu formula not integral at k={k}: {num}/{m - k}")
    return quot


def c_range(k: int, s: int, t: int) -> tuple[Fraction, Fraction]:
    """Open interval (1, c_max) of admissible c, exact rationals.

    k = 3: c_max = 1 + (s-2t) * 3 * min(1/(77s+158t), 1/(75s+164t));
    k > 3: c_max = 1 + (s-2t)/((nu-1)s + 2t nu), nu = nu_of_k(k).
    """
    if k < 3:
        raise DomainError(f"c_range needs k >= 3, got {k}")
    if s <= 2 * t:
        raise DomainError(f"c_range needs s > 2t, got s={s}, t={t}")
    excess = s - 2 * t
    if k == 3:
        c_max = 1 + excess * 3 * min(
            Fraction(1, 77 * s + 158 * t), Fraction(1, 75 * s + 164 * t)
        )
    else:
        nu = nu_of_k(k)
        c_max = 1 + Fraction(excess, (nu - 1) * s + 2 * t * nu)
    return (Fraction(1), c_max)
