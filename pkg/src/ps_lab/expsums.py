"""Exponential sums: Weyl sums, PS-prime sums, Vaaler polynomials, Vaughan's
identity, and an empirical harness for the bound expressions used with them.

Phase hygiene is the whole game here.  For rational-type evaluation points the
phase alpha * n^k is reduced mod 1 in exact integer arithmetic before the
complex exponential is taken, so the summand phases carry no accumulated
rounding error no matter how large n^k grows.  Floats are converted to exact
dyadic rationals (their binary value), which realizes the "store alpha in
extended precision, keep only fractional parts" discipline exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence, Union

import gmpy2
import numpy as np

from . import primes
from .errors import DomainError, GridTooLarge
from .ps_core import PSParams, enumerate_ps_primes

AlphaLike = Union[int, float, str, Fraction]


def as_phase_fraction(alpha: AlphaLike) -> Fraction:
    """Exact rational value of an evaluation point.

    Strings parse as exact decimals or quotients ("0.25", "1/3"); floats map
    to their exact binary value; ints and Fractions pass through.
    """
    if isinstance(alpha, Fraction):
        return alpha
    if isinstance(alpha, (int, str)):
        return Fraction(alpha)
    if isinstance(alpha, float):
        return Fraction(alpha)
    raise TypeError(f"cannot interpret evaluation point of type {type(alpha)!r}")


def _powers_mod(n_max: int, k: int, den: int) -> np.ndarray | list[int]:
    """n^k mod den for n = 1..n_max (int64 fast path when den^2 < 2^63)."""
    if den < 2**31:
        n = np.arange(1, n_max + 1, dtype=np.int64) % den
        pk = np.ones(n_max, dtype=np.int64)
        for _ in range(k):
            pk = pk * n % den
        return pk
    return [pow(n, k, den) for n in range(1, n_max + 1)]


def weyl_sum(alpha: AlphaLike, k: int, X: int) -> complex:
    """Weyl sum over n = 1..X of e(alpha n^k), with exact phase reduction."""
    if X < 1:
        raise DomainError(f"weyl_sum expects X >= 1, got {X}")
    if k < 1:
        raise DomainError(f"weyl_sum expects k >= 1, got {k}")
    a = as_phase_fraction(alpha)
    den = a.denominator
    if den == 1:
        return complex(X)
    num = a.numerator % den
    pk = _powers_mod(X, k, den)
    if isinstance(pk, np.ndarray):
        # num < den < 2^31, entries of pk < den, so num * pk fits in int64.
        r = num * pk % den
        return complex(np.sum(np.exp(2j * np.pi * (r.astype(np.float64) / den))))
    r = [(num * v) % den for v in pk]
    return complex(np.sum(np.exp(2j * np.pi * (np.array(r, dtype=np.float64) / den))))


def _prime_power_phases(alpha: Fraction, ps: Sequence[int], k: int) -> np.ndarray:
    den = alpha.denominator
    if den == 1:
        return np.zeros(len(ps))
    num = alpha.numerator % den
    r = [(num * pow(p, k, den)) % den for p in ps]
    return np.array(r, dtype=np.float64) / den


def ps_prime_sum(alpha: AlphaLike, k: int, X: int, params: PSParams) -> complex:
    """S-type sum: e(alpha p^k) over Piatetski-Shapiro primes p <= X."""
    if X < 2:
        raise DomainError(f"ps_prime_sum expects X >= 2, got {X}")
    ps = enumerate_ps_primes(X, params)
    a = as_phase_fraction(alpha)
    ph = _prime_power_phases(a, ps, k)
    return complex(np.sum(np.exp(2j * np.pi * ph)))


def weighted_prime_sum(alpha: AlphaLike, k: int, X: int, params: PSParams) -> complex:
    """T-type sum: delta p^(delta-1) e(alpha p^k) over all primes p <= X."""
    if X < 2:
        raise DomainError(f"weighted_prime_sum expects X >= 2, got {X}")
    ps = primes.primes_up_to(X)
    d = params.delta_float
    w = d * np.power(np.array(ps, dtype=np.float64), d - 1.0)
    a = as_phase_fraction(alpha)
    ph = _prime_power_phases(a, ps, k)
    return complex(np.sum(w * np.exp(2j * np.pi * ph)))


@dataclass(frozen=True)
class ExpSumSample:
    """One evaluated exponential sum (used by the CLI sweeps)."""

    kind: str  # weyl | S_ps | T_weighted | shifted_poly
    alpha: Fraction
    k: int
    X: int
    value: complex
    params: PSParams | None = None

    def __post_init__(self):
        if self.kind not in ("weyl", "S_ps", "T_weighted", "shifted_poly"):
            raise DomainError(f"unknown sample kind {self.kind!r}")


def sample(kind: str, alpha: AlphaLike, k: int, X: int, params: PSParams | None = None) -> ExpSumSample:
    """Evaluate one sum and wrap it with its inputs."""
    a = as_phase_fraction(alpha)
    if kind == "weyl":
        v = weyl_sum(a, k, X)
    elif kind == "S_ps":
        v = ps_prime_sum(a, k, X, params)
    elif kind == "T_weighted":
        v = weighted_prime_sum(a, k, X, params)
    else:
        raise DomainError(f"unknown sample kind {kind!r}")
    return ExpSumSample(kind=kind, alpha=a, k=k, X=X, value=v, params=params)


# ---------------------------------------------------------------------------
# Vaaler's trigonometric approximation to the sawtooth
# ---------------------------------------------------------------------------


def sawtooth(x):
    """psi(x) = x - floor(x) - 1/2 (vectorized)."""
    x = np.asarray(x, dtype=np.float64)
    return x - np.floor(x) - 0.5


@dataclass(frozen=True)
class VaalerPolynomial:
    """Degree-H trigonometric approximation psi* to the sawtooth psi.

    coeffs_a maps h (1 <= |h| <= H) to the coefficient of e(hx) in psi*;
    coeffs_b maps h (|h| < H) to the Fejer-type envelope coefficients, so
    that |psi(x) - psi*(x)| <= sum_h b_h e(hx) pointwise.
    """

    H: int
    coeffs_a: Mapping[int, complex]
    coeffs_b: Mapping[int, float]

    def psi_star(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=np.float64))
        h = np.arange(1, self.H + 1)
        a = np.array([self.coeffs_a[int(j)] for j in h])
        # a_{-h} = conj(a_h), so the +-h pair contributes 2 Re(a_h e(hx)).
        ph = np.exp(2j * np.pi * np.outer(x, h))
        return 2.0 * np.real(ph @ a)

    def envelope(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=np.float64))
        h = np.arange(1, self.H)
        b0 = self.coeffs_b[0]
        b = np.array([self.coeffs_b[int(j)] for j in h])
        ph = np.cos(2.0 * np.pi * np.outer(x, h))
        return b0 + 2.0 * (ph @ b)


def build_vaaler(H: int) -> VaalerPolynomial:
    """Vaaler's psi* of degree H with its majorant envelope.

    Coefficients (documented choice):
        a_h = -Jhat(h/H) / (2 pi i h),  Jhat(t) = pi t (1-t) cot(pi t) + t,
        for 1 <= h <= H (Jhat(1) = 0, so a_H = 0), a_{-h} = conj(a_h);
        b_h = (1 - |h|/H) / (2H) for |h| < H.
    The envelope is then the Fejer kernel over 2H and equals
    sin^2(pi H x) / (2 H^2 sin^2(pi x)), with sup value 1/2 at integers.
    """
    if H < 2:
        raise DomainError(f"build_vaaler expects H >= 2, got {H}")
    coeffs_a: dict[int, complex] = {}
    for h in range(1, H + 1):
        t = h / H
        jhat = (math.pi * t * (1 - t) / math.tan(math.pi * t) + t) if h < H else 0.0
        a_h = -jhat / (2j * math.pi * h)
        coeffs_a[h] = a_h
        coeffs_a[-h] = a_h.conjugate()
    coeffs_b: dict[int, float] = {}
    for h in range(0, H):
        b_h = (1.0 - h / H) / (2.0 * H)
        coeffs_b[h] = b_h
        if h:
            coeffs_b[-h] = b_h
    return VaalerPolynomial(H=H, coeffs_a=coeffs_a, coeffs_b=coeffs_b)


# ---------------------------------------------------------------------------
# Vaughan's identity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VaughanDecomposition:
    """The three pieces whose signed combination reproduces Lambda(n).

    combined = e1 - e2 - e3 equals the von Mangoldt value for n > v:
        e1 = sum over ab = n, a <= u of mu(a) log b
        e2 = sum over ab = n, a > v, b > u of Lambda(a) * sum_{d | b, d <= u} mu(d)
        e3 = sum over abc = n, b <= u, a <= v of mu(b) Lambda(a)
    """

    n: int
    u: float
    v: float
    e1: float
    e2: float
    e3: float

    @property
    def combined(self) -> float:
        return self.e1 - self.e2 - self.e3


def vaughan_decompose(n: int, u: float, v: float) -> VaughanDecomposition:
    """Evaluate the three sums of the identity by full divisor enumeration."""
    if u < 1 or v < 1:
        raise DomainError(f"vaughan_decompose expects u, v >= 1, got {u}, {v}")
    if n <= v:
        raise DomainError(f"identity needs n > v, got n={n}, v={v}")
    divs = primes.divisors(n)
    e1 = math.fsum(
        primes.moebius(a) * math.log(n // a) for a in divs if a <= u and n // a >= 1
    )
    e2 = 0.0
    for a in divs:
        if a <= v:
            continue
        b = n // a
        if b <= u:
            continue
        la = primes.von_mangoldt(a)
        if la == 0.0:
            continue
        e2 += la * sum(primes.moebius(d) for d in primes.divisors(b) if d <= u)
    e3 = 0.0
    for a in divs:
        la = primes.von_mangoldt(a)
        if la == 0.0 or a > v:
            continue
        rest = n // a
        # b runs over divisors of n/a with b <= u; c = n/(ab) is determined.
        e3 += la * sum(primes.moebius(b) for b in primes.divisors(rest) if b <= u)
    return VaughanDecomposition(n=n, u=u, v=v, e1=e1, e2=e2, e3=e3)


# ---------------------------------------------------------------------------
# Shifted polynomial-plus-power sums and the bound harness
# ---------------------------------------------------------------------------

SHIFTED_SUM_PRECISION_BITS = 192


def shifted_poly_sum(
    g: Sequence[float],
    D: float,
    delta: AlphaLike,
    interval: tuple[int, int],
    precision_bits: int = SHIFTED_SUM_PRECISION_BITS,
) -> complex:
    """Direct sum of e(g(n) + D n^delta) over integers n in (lo, hi].

    g is the coefficient list (g[i] multiplies n^i).  Phases are evaluated
    with MPFR at precision_bits and reduced mod 1 there, so the fractional
    part keeps ~precision_bits - log2(|phase|) good bits.
    """
    lo, hi = interval
    if hi <= lo:
        raise DomainError(f"interval ({lo}, {hi}] is empty")
    d = as_phase_fraction(delta)
    ctx = gmpy2.context(precision=precision_bits)
    dq = gmpy2.mpq(d.numerator, d.denominator)
    Dm = gmpy2.mpfr(D, precision=precision_bits)
    gm = [gmpy2.mpfr(c, precision=precision_bits) for c in g]
    out = np.empty(hi - lo, dtype=np.complex128)
    for idx, n in enumerate(range(lo + 1, hi + 1)):
        acc = gmpy2.mpfr(0, precision=precision_bits)
        for c in reversed(gm):
            acc = ctx.add(ctx.mul(acc, gmpy2.mpz(n)), c)
        if D != 0:
            pw = ctx.exp(ctx.mul(dq, ctx.log(gmpy2.mpz(n))))
            acc = ctx.add(acc, ctx.mul(Dm, pw))
        frac = acc - gmpy2.floor(acc)
        out[idx] = np.exp(2j * np.pi * float(frac))
    return complex(np.sum(out))


@dataclass(frozen=True)
class BoundExperimentReport:
    """Observed-vs-bound ratios for one lemma-shaped estimate."""

    lemma: str
    eps: float
    seed: int
    rows: tuple[dict, ...]
    max_ratio: float


_BUDGET_TERMS = 20_000_000


def _check_budget(total_terms: int) -> None:
    if total_terms > _BUDGET_TERMS:
        raise GridTooLarge(
            f"experiment grid needs {total_terms} summand evaluations "
            f"(budget {_BUDGET_TERMS})"
        )


def _sigma(k: int, ell: int, rule: str) -> float:
    if rule == "2^k":
        if ell != k + 1:
            raise DomainError("sigma rule 2^k applies only when ell = k+1")
        return 1.0 / 2**k
    return 1.0 / (ell * (ell - 1))


def _shift_bound(D: float, N: int, k: int, ell: int, delta: float, sigma: float, eps: float) -> float:
    B = D * N**delta
    return N ** (1 + eps) * (
        (D * N ** (delta - k - 1)) ** sigma
        + B ** (sigma / (ell + 1)) * N**-sigma
        + B ** (-(ell - k) / (ell + 1) * sigma)
    )


def _falling(delta: float, m: int) -> float:
    """delta (delta-1) ... (delta-m+1)."""
    out = 1.0
    for i in range(m):
        out *= delta - i
    return out


def bound_experiment(
    lemma: str,
    grid: Mapping[str, object] | None = None,
    seed: int = 0,
    eps: float = 0.05,
) -> BoundExperimentReport:
    """Evaluate true sums against a lemma-shaped right-hand side.

    Supported shapes: "shift" (polynomial plus D n^delta over (N,2N]),
    "HB" (k-th-derivative test), "corput" ((q+2)-derivative test), and
    "typeII" (bilinear sums with unimodular coefficients).  The bound uses
    constant 1 and the documented eps; the report records every ratio and
    their maximum.  Evidence, not proof.
    """
    g = dict(grid or {})
    rows: list[dict] = []
    if lemma == "shift":
        k = int(g.pop("k", 3))
        ell = int(g.pop("ell", k + 1))
        rule = str(g.pop("sigma_rule", "l(l-1)"))
        d_frac = as_phase_fraction(g.pop("delta", Fraction(2, 3)))
        delta = float(d_frac)
        D_list = [float(x) for x in g.pop("D", (10.0, 1000.0))]
        N_list = [int(x) for x in g.pop("N", (1000, 10000))]
        _reject_unknown(g, lemma)
        sigma = _sigma(k, ell, rule)
        _check_budget(len(D_list) * sum(N_list))
        for N in N_list:
            for D in D_list:
                actual = abs(shifted_poly_sum((), D, d_frac, (N, 2 * N)))
                bound = _shift_bound(D, N, k, ell, delta, sigma, eps)
                rows.append(
                    {
                        "k": k,
                        "ell": ell,
                        "sigma": sigma,
                        "delta": delta,
                        "D": D,
                        "N": N,
                        "actual": actual,
                        "bound": bound,
                        "ratio": actual / bound,
                    }
                )
    elif lemma == "HB":
        k = int(g.pop("k", 3))
        if k < 3:
            raise DomainError("HB shape needs k >= 3")
        d_frac = as_phase_fraction(g.pop("delta", Fraction(2, 3)))
        delta = float(d_frac)
        D_list = [float(x) for x in g.pop("D", (1.0, 100.0))]
        N_list = [int(x) for x in g.pop("N", (1000, 10000))]
        _reject_unknown(g, lemma)
        _check_budget(len(D_list) * sum(N_list))
        kk = k * (k - 1)
        for N in N_list:
            for D in D_list:
                # f(x) = +-D (x+N)^delta on [0, N]; the sum over n in [1, N]
                # equals the shifted sum over (N, 2N].
                actual = abs(shifted_poly_sum((), D, d_frac, (N, 2 * N)))
                lam = abs(_falling(delta, k)) * D * (2.0 * N) ** (delta - k)
                A = 2.0 ** (k - delta)
                bound = N ** (1 + eps) * (
                    lam ** (1.0 / kk)
                    + N ** (-1.0 / kk)
                    + N ** (-2.0 / kk) * lam ** (-2.0 / (k * kk))
                )
                rows.append(
                    {
                        "k": k,
                        "delta": delta,
                        "D": D,
                        "N": N,
                        "lambda_k": lam,
                        "A": A,
                        "actual": actual,
                        "bound": bound,
                        "ratio": actual / bound,
                    }
                )
    elif lemma == "corput":
        q = int(g.pop("q", 2))
        d_frac = as_phase_fraction(g.pop("delta", Fraction(2, 3)))
        delta = float(d_frac)
        D_list = [float(x) for x in g.pop("D", (1.0, 50.0))]
        N_list = [int(x) for x in g.pop("N", (1000, 10000))]
        _reject_unknown(g, lemma)
        _check_budget(len(D_list) * sum(N_list))
        Q = 2**q
        for N in N_list:
            for D in D_list:
                actual = abs(shifted_poly_sum((), D, d_frac, (N, 2 * N)))
                lam = abs(_falling(delta, q + 2)) * D * (2.0 * N) ** (delta - q - 2)
                alpha = 2.0 ** (q + 2 - delta)
                size = float(N)  # |I| for I = (N, 2N]
                bound = (
                    size * (alpha**2 * lam) ** (1.0 / (4 * Q - 2))
                    + size ** (1 - 1.0 / (2 * Q)) * alpha ** (1.0 / (2 * Q))
                    + size ** (1 - 2.0 / Q + 1.0 / Q**2) * lam ** (-1.0 / (2 * Q))
                )
                rows.append(
                    {
                        "q": q,
                        "delta": delta,
                        "D": D,
                        "N": N,
                        "lambda": lam,
                        "alpha": alpha,
                        "actual": actual,
                        "bound": bound,
                        "ratio": actual / bound,
                    }
                )
    elif lemma == "typeII":
        k = int(g.pop("k", 3))
        ell = int(g.pop("ell", k + 1))
        rule = str(g.pop("sigma_rule", "l(l-1)"))
        delta = float(as_phase_fraction(g.pop("delta", Fraction(2, 3))))
        h_list = [float(x) for x in g.pop("h", (1.0, 16.0))]
        N_list = [int(x) for x in g.pop("N", (10000, 100000))]
        coeffs = str(g.pop("coeffs", "ones"))
        _reject_unknown(g, lemma)
        sigma = _sigma(k, ell, rule)
        _check_budget(4 * len(h_list) * sum(N_list))
        rng = np.random.default_rng(seed)
        for N in N_list:
            x = max(2, round(math.sqrt(N)))
            y = N // x
            m_vals = np.arange(x + 1, 2 * x + 1, dtype=np.int64)
            if coeffs == "ones":
                b_m = np.ones(len(m_vals), dtype=np.complex128)
            else:
                b_m = np.exp(2j * np.pi * rng.random(len(m_vals)))
            for h in h_list:
                total = 0j
                for mi, m in enumerate(m_vals):
                    n_lo = max(y, N // m)  # exclusive: n > max(y, N/m)
                    n_hi = min(2 * y, (2 * N) // m)
                    if n_hi <= n_lo:
                        continue
                    n = np.arange(n_lo + 1, n_hi + 1, dtype=np.float64)
                    if coeffs == "ones":
                        a_n = 1.0
                    else:
                        a_n = np.exp(2j * np.pi * rng.random(len(n)))
                    ph = h * (n * float(m)) ** delta
                    total += b_m[mi] * np.sum(a_n * np.exp(2j * np.pi * np.mod(ph, 1.0)))
                actual = abs(total)
                s1, s2, s3 = _typeII_bounds(h, N, x, k, ell, delta, sigma)
                bound = N ** (1 + eps) * min(s1, s2, s3)
                rows.append(
                    {
                        "k": k,
                        "ell": ell,
                        "sigma": sigma,
                        "delta": delta,
                        "h": h,
                        "N": N,
                        "x": x,
                        "y": y,
                        "coeffs": coeffs,
                        "S1": s1,
                        "S2": s2,
                        "S3": s3,
                        "actual": actual,
                        "bound": bound,
                        "ratio": actual / bound,
                    }
                )
    else:
        raise DomainError(f"unknown bound-experiment shape {lemma!r}")
    max_ratio = max((r["ratio"] for r in rows), default=0.0)
    return BoundExperimentReport(
        lemma=lemma, eps=eps, seed=seed, rows=tuple(rows), max_ratio=max_ratio
    )


def _reject_unknown(leftover: Mapping[str, object], lemma: str) -> None:
    if leftover:
        raise DomainError(f"unknown grid keys for {lemma!r}: {sorted(leftover)}")


def _typeII_bounds(
    h: float, N: int, x: int, k: int, ell: int, delta: float, sigma: float
) -> tuple[float, float, float]:
    """The three right-hand expressions of the bilinear-sum estimate."""
    ah = abs(h)
    s1 = (
        (ah * N ** (delta - 1) * x**-ell) ** (sigma / 2 / (sigma + ell + 1))
        + (ah * N ** (delta - 1) * x**-k) ** (sigma / 2 / (1 + sigma))
        + (ah * N**delta) ** (-(ell - k) / (ell + 1) * sigma / 2)
        + (x / N) ** 0.5
        + x ** (-(ell - k) / (ell - k + 1) * sigma / 2)
    )
    s2 = (
        (x / N) ** 0.5
        + (ah * N**delta) ** (-1.0 / (k * (k + 1) ** 2))
        + x ** (-1.0 / (2 * k * (k + 1)))
        + (ah * N ** (delta - 1) * x**-k) ** (1.0 / (2 * (k * k + k + 1)))
    )
    s3 = (
        x ** -(2.0 ** (-k - 1))
        + (x / N) ** 0.5
        + x ** (2.0 ** (1 - 2 * k) - 2.0 ** (1 - k))
        * (ah * N**delta * x ** (-1 - k)) ** -(2.0 ** (-k - 1))
        + (ah * N ** (delta - 1) * x**-k) ** (1.0 / (2 ** (k + 2) - 2))
    )
    return s1, s2, s3
