"""Piatetski-Shapiro sequences with certified integer parts.

The sequence under study is H = {floor(m**c) : m = 1, 2, ...} for a fixed
exponent 1 < c < 2, together with the primes inside it.  Floating point alone
cannot certify a value of floor(m**c): when m**c is very close to an integer a
rounded evaluation may land on the wrong side.  Every floor computed here is
therefore *certified* by an interval enclosure:

* the exponent is parsed as an exact rational c = u/v (decimal strings like
  "1.5" convert exactly, so do Fractions and ints);
* if m is a perfect v-th power, m**c = w**u is an exact integer computed in
  integer arithmetic (no enclosure needed -- this is also the only case in
  which an enclosure loop could fail to terminate);
* otherwise m**c is irrational, and [down(m**c), up(m**c)] is evaluated with
  MPFR directed rounding at increasing precision until both endpoints share
  the same floor.

Membership of n in H uses the difference characterization

    n in H  <=>  floor(-n**d) - floor(-(n+1)**d) = 1,   d = 1/c,

and the fractional-part correction Delta psi(n) ties membership to the smooth
density (n+1)**d - n**d via

    1_H(n) = (n+1)**d - n**d + psi(-(n+1)**d) - psi(-n**d),

where psi(x) = x - floor(x) - 1/2.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Union

import gmpy2

from . import primes
from .errors import DomainError, PrecisionExhausted

ExponentLike = Union[str, int, float, Fraction]

DEFAULT_BASE_PRECISION_BITS = 96
DEFAULT_MAX_PRECISION_BITS = 4096


def as_fraction(e: ExponentLike) -> Fraction:
    """Parse an exponent to an exact Fraction.

    Strings go through Fraction's decimal parser ("1.5" -> 3/2), floats are
    converted exactly (their binary value), ints and Fractions pass through.
    """
    if isinstance(e, Fraction):
        return e
    if isinstance(e, (str, int)):
        return Fraction(e)
    if isinstance(e, float):
        return Fraction(e)
    raise TypeError(f"cannot interpret exponent of type {type(e)!r}")


@dataclass(frozen=True)
class PSParams:
    """Parameters of a Piatetski-Shapiro sequence floor(m**c).

    c is stored exactly as a Fraction in (1, 2).  The precision fields bound
    the MPFR working precision used for certified floors.
    """

    c: Fraction
    base_precision_bits: int = DEFAULT_BASE_PRECISION_BITS
    max_precision_bits: int = DEFAULT_MAX_PRECISION_BITS

    def __init__(
        self,
        c: ExponentLike,
        base_precision_bits: int = DEFAULT_BASE_PRECISION_BITS,
        max_precision_bits: int = DEFAULT_MAX_PRECISION_BITS,
    ):
        c = as_fraction(c)
        if not Fraction(1) < c < Fraction(2):
            raise DomainError(f"c must lie in (1, 2), got {c}")
        if not (0 < base_precision_bits <= max_precision_bits):
            raise DomainError(
                "need 0 < base_precision_bits <= max_precision_bits, got "
                f"{base_precision_bits} and {max_precision_bits}"
            )
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "base_precision_bits", int(base_precision_bits))
        object.__setattr__(self, "max_precision_bits", int(max_precision_bits))

    @property
    def delta(self) -> Fraction:
        """The inverse exponent d = 1/c, exactly."""
        return 1 / self.c

    @property
    def c_float(self) -> float:
        return float(self.c)

    @property
    def delta_float(self) -> float:
        return float(self.delta)


@dataclass(frozen=True)
class CertifiedFloor:
    """A floor value together with the MPFR precision that certified it.

    precision_used_bits is the working precision of the successful enclosure;
    for exact integer powers (decided in integer arithmetic) it records the
    base precision of the request.
    """

    value: int
    precision_used_bits: int


def _contexts(prec: int):
    """(round-down, round-up) MPFR contexts at the given precision."""
    dn = gmpy2.context(precision=prec, round=gmpy2.RoundDown)
    up = gmpy2.context(precision=prec, round=gmpy2.RoundUp)
    return dn, up


def _pow_enclosure(m: int, e: Fraction, prec: int):
    """Directed-rounding enclosure [lo, hi] of m**e at precision prec.

    Requires m >= 2 and e > 0 so that log and exp are monotone increasing;
    then rounding every step down (up) gives a valid lower (upper) bound.
    """
    dn, up = _contexts(prec)
    mz = gmpy2.mpz(m)
    eq = gmpy2.mpq(e.numerator, e.denominator)
    lo = dn.exp(dn.mul(eq, dn.log(mz)))
    hi = up.exp(up.mul(eq, up.log(mz)))
    return lo, hi


def floor_pow(m: int, e: ExponentLike, params: PSParams | None = None) -> CertifiedFloor:
    """Certified floor(m**e) for integer m >= 1 and rational e in (0, 2).

    The result is exact: either m**e is recognized as an exact integer power,
    or an interval enclosure at some precision <= max_precision_bits brackets
    it strictly between integers.  PrecisionExhausted is raised if the cap is
    reached while the enclosure still straddles an integer (cannot happen for
    irrational m**e with a generous cap, but the cap keeps the loop total).
    """
    e = as_fraction(e)
    if m < 1:
        raise DomainError(f"floor_pow expects m >= 1, got {m}")
    if not Fraction(0) < e < Fraction(2):
        raise DomainError(f"floor_pow expects an exponent in (0, 2), got {e}")
    base = params.base_precision_bits if params else DEFAULT_BASE_PRECISION_BITS
    cap = params.max_precision_bits if params else DEFAULT_MAX_PRECISION_BITS

    u, v = e.numerator, e.denominator
    root, exact = gmpy2.iroot(gmpy2.mpz(m), v)
    if exact:
        # m = w**v, so m**(u/v) = w**u exactly (covers m = 1 as well).
        return CertifiedFloor(int(root**u), base)

    prec = base
    while True:
        lo, hi = _pow_enclosure(m, e, prec)
        f_lo = int(gmpy2.floor(lo))
        f_hi = int(gmpy2.floor(hi))
        if f_lo == f_hi:
            return CertifiedFloor(f_lo, prec)
        if prec >= cap:
            raise PrecisionExhausted(
                f"floor({m}**{e}) undecided at {prec} bits (cap {cap})"
            )
        prec = min(2 * prec, cap)


def _floor_neg_delta_pow(n: int, params: PSParams) -> int:
    """floor(-n**d) with d = 1/c, certified.

    Uses floor(-x) = -floor(x) - 1 for non-integer x and exact integer
    arithmetic when n**d is an integer.
    """
    d = params.delta
    root, exact = gmpy2.iroot(gmpy2.mpz(n), d.denominator)
    if exact:
        return -int(root**d.numerator)
    return -floor_pow(n, d, params).value - 1


def is_ps_member(n: int, params: PSParams) -> bool:
    """Whether n >= 1 lies in H = {floor(m**c)}.

    Characterization: n in H iff floor(-n**d) - floor(-(n+1)**d) = 1 with
    d = 1/c (the difference is always 0 or 1 for 1 < c < 2 and n >= 1).
    """
    if n < 1:
        raise DomainError(f"is_ps_member expects n >= 1, got {n}")
    diff = _floor_neg_delta_pow(n, params) - _floor_neg_delta_pow(n + 1, params)
    if diff not in (0, 1):
        raise AssertionError(
            f"membership difference {diff} outside {{0,1}} at n={n}, c={params.c}"
        )
    return diff == 1


def _psi_at_neg_pow(n: int, params: PSParams) -> float:
    """psi(-n**d) where psi(x) = x - floor(x) - 1/2 and d = 1/c."""
    d = params.delta
    fl = _floor_neg_delta_pow(n, params)
    root, exact = gmpy2.iroot(gmpy2.mpz(n), d.denominator)
    if exact:
        return -0.5
    # Midpoint evaluation: 160 bits is far below the certified-floor cap but
    # leaves ~48 guard bits for the subtraction below at desk scale.
    dn, _ = _contexts(160)
    x = dn.exp(dn.mul(gmpy2.mpq(d.numerator, d.denominator), dn.log(gmpy2.mpz(n))))
    return float(-x - fl - gmpy2.mpfr("0.5"))


def delta_psi(n: int, params: PSParams) -> float:
    """The correction psi(-(n+1)**d) - psi(-n**d), d = 1/c.

    Satisfies 1_H(n) = (n+1)**d - n**d + delta_psi(n) up to the floating
    point error of the evaluation (the identity is exact in exact arithmetic).
    """
    if n < 1:
        raise DomainError(f"delta_psi expects n >= 1, got {n}")
    return _psi_at_neg_pow(n + 1, params) - _psi_at_neg_pow(n, params)


def ps_index_count(limit: int, params: PSParams) -> int:
    """Number of indices m >= 1 with floor(m**c) <= limit.

    Equals |H intersect [1, limit]| since m -> floor(m**c) is strictly
    increasing for c > 1.
    """
    if limit < 1:
        return 0
    # floor(m**c) <= limit  <=>  m**c < limit + 1  <=>  m < (limit+1)**(1/c).
    d = params.delta
    root, exact = gmpy2.iroot(gmpy2.mpz(limit + 1), d.denominator)
    if exact:
        return int(root**d.numerator) - 1
    return floor_pow(limit + 1, d, params).value


def enumerate_ps(limit: int, params: PSParams, partitions: int = 1) -> list[int]:
    """All elements of H = {floor(m**c)} up to limit, increasing.

    The index range is split into `partitions` contiguous chunks evaluated
    independently (in a thread pool when partitions > 1) and concatenated in
    index order, so the result does not depend on the partition count.
    """
    m_max = ps_index_count(limit, params)
    if m_max <= 0:
        return []

    def chunk(lo: int, hi: int) -> list[int]:
        return [floor_pow(m, params.c, params).value for m in range(lo, hi)]

    if partitions <= 1 or m_max < 4 * partitions:
        values = chunk(1, m_max + 1)
    else:
        bounds = [1 + (m_max * i) // partitions for i in range(partitions + 1)]
        bounds[-1] = m_max + 1
        with ThreadPoolExecutor(max_workers=partitions) as pool:
            parts = pool.map(chunk, bounds[:-1], bounds[1:])
        values = [v for part in parts for v in part]

    assert all(a < b for a, b in zip(values, values[1:])), "floors not increasing"
    assert not values or values[-1] <= limit
    return values


def enumerate_ps_primes(limit: int, params: PSParams, partitions: int = 1) -> list[int]:
    """Primes in H up to limit, increasing."""
    members = enumerate_ps(limit, params, partitions=partitions)
    if limit <= primes.SIEVE_CACHE_CAP:
        table = primes.prime_table(limit)
        return [n for n in members if table[n]]
    return [n for n in members if primes.is_prime(n)]
