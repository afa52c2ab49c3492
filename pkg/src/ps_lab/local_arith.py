"""Local arithmetic for k-th powers: Gauss sums, local exponents, singular series.

Notation (all sums over a complete residue system mod q):

    S(a, q)   = sum_{x mod q, gcd(x,q)=1} e(a x^k / q)
    S_m(q)    = sum_{a mod q, gcd(a,q)=1} (S(a,q)/phi(q))^s e(-m a / q)
    sigma(m)  = sum_{q >= 1} S_m(q)         (singular series; truncated at Q here)

Two independent evaluation routes are kept side by side on purpose: the
per-pair `gauss_power_sum` walks the definition term by term, while
`gauss_row` evaluates all residues a at once through an FFT of the histogram
of x^k mod q.  Tests compare them; production sweeps use the row form.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import primes
from .errors import DomainError, InvalidModulus


@dataclass(frozen=True)
class LocalExponent:
    """The exponents theta = v_p(k) and gamma attached to a prime p and degree k.

    gamma = theta + 2 when p = 2 and k is even, else theta + 1.
    """

    p: int
    k: int
    theta: int
    gamma: int


def theta_gamma(p: int, k: int) -> LocalExponent:
    """Local exponent pair (theta, gamma) for a prime p and degree k >= 1."""
    if k < 1:
        raise DomainError(f"theta_gamma expects k >= 1, got {k}")
    if not primes.is_prime(p):
        raise DomainError(f"theta_gamma expects p prime, got {p}")
    theta = 0
    kk = k
    while kk % p == 0:
        kk //= p
        theta += 1
    gamma = theta + 2 if (p == 2 and k % 2 == 0) else theta + 1
    return LocalExponent(p=p, k=k, theta=theta, gamma=gamma)


def modulus_K(k: int) -> int:
    """K(k) = product of p^gamma over primes p with (p-1) | k."""
    if k < 1:
        raise DomainError(f"modulus_K expects k >= 1, got {k}")
    K = 1
    for d in primes.divisors(k):
        p = d + 1
        if primes.is_prime(p):
            K *= p ** theta_gamma(p, k).gamma
    return K


def gauss_power_sum(a: int, q: int, k: int) -> complex:
    """S(a, q) = sum over x mod q, gcd(x,q)=1, of e(a x^k / q), term by term."""
    if q < 1:
        raise InvalidModulus(f"modulus must be a positive integer, got {q}")
    if k < 1:
        raise DomainError(f"gauss_power_sum expects k >= 1, got {k}")
    a %= q
    total = 0j
    for x in range(1, q + 1):
        if math.gcd(x, q) == 1:
            r = a * pow(x, k, q) % q
            total += cmath.exp(2j * cmath.pi * r / q)
    return total


_row_cache: dict[tuple[int, int], np.ndarray] = {}


def gauss_row(q: int, k: int) -> np.ndarray:
    """All Gauss sums S(a, q) for a = 0..q-1 as one complex array.

    S(a, q) = sum_r h[r] e(a r / q) where h is the histogram of x^k mod q over
    units x, i.e. the conjugate DFT of h.  Results are cached per (q, k).
    """
    if q < 1:
        raise InvalidModulus(f"modulus must be a positive integer, got {q}")
    if k < 1:
        raise DomainError(f"gauss_row expects k >= 1, got {k}")
    key = (q, k)
    row = _row_cache.get(key)
    if row is not None:
        return row
    x = np.arange(q, dtype=np.int64)
    unit = (np.gcd(x, q) == 1) if q > 1 else np.ones(1, dtype=bool)
    pk = np.ones(q, dtype=np.int64)
    for _ in range(k):
        pk = pk * x % q
    hist = np.bincount(pk[unit], minlength=q).astype(np.float64)
    row = np.conj(np.fft.fft(hist))
    row.flags.writeable = False
    _row_cache[key] = row
    return row


def S_m_of_q(m: int, q: int, s: int, k: int) -> float:
    """The q-th singular series term sum_{(a,q)=1} (S(a,q)/phi(q))^s e(-ma/q).

    The sum is real by conjugate symmetry a <-> q-a; the imaginary part of the
    float evaluation is checked against a 1e-9 guard before being dropped.
    """
    if q < 1:
        raise InvalidModulus(f"modulus must be a positive integer, got {q}")
    if s < 1 or k < 1:
        raise DomainError(f"S_m_of_q expects s, k >= 1, got s={s}, k={k}")
    row = gauss_row(q, k)
    a = np.arange(q, dtype=np.int64)
    unit = (np.gcd(a, q) == 1) if q > 1 else np.ones(1, dtype=bool)
    phi = primes.euler_phi(q)
    phase = np.exp(-2j * np.pi * ((m % q) * a % q) / q)
    total = np.sum((row[unit] / phi) ** s * phase[unit])
    if abs(total.imag) > 1e-9 * phi:
        raise AssertionError(
            f"S_m(q) should be real; got imaginary part {total.imag} at "
            f"m={m}, q={q}, s={s}, k={k}"
        )
    return float(total.real)


@dataclass(frozen=True)
class SingularSeriesResult:
    """Truncated singular series sum_{q <= Q} S_m(q) with per-q terms."""

    m: int
    s: int
    k: int
    Q: int
    terms: tuple[tuple[int, float], ...]
    partial_sum: float
    tail_bound_estimate: float


def singular_series(m: int, s: int, k: int, Q: int) -> SingularSeriesResult:
    """Partial singular series for m as a sum of s k-th powers, q up to Q.

    The tail estimate integrates the crude term bound |S_m(q)| <= q^(1 - s/2 + 0.1)
    past Q, so it needs s >= 5; the 0.1 absorbs the epsilon in the Gauss sum
    bound |S(a,q)| <= q^(1/2 + eps) at desk scale.
    """
    if s < 5:
        raise DomainError(f"singular_series expects s >= 5, got {s}")
    if Q < 1:
        raise DomainError(f"singular_series expects Q >= 1, got {Q}")
    terms = tuple((q, S_m_of_q(m, q, s, k)) for q in range(1, Q + 1))
    partial = math.fsum(t for _, t in terms)
    exponent = 2.1 - s / 2
    tail = Q**exponent / (s / 2 - 2.1)
    return SingularSeriesResult(
        m=m, s=s, k=k, Q=Q, terms=terms, partial_sum=partial, tail_bound_estimate=tail
    )


@dataclass(frozen=True)
class ArithRecord:
    """Values of the standard arithmetic functions at one integer."""

    n: int
    phi: int
    mu: int
    von_mangoldt: float
    omega: int


def arithmetic_functions(n: int) -> ArithRecord:
    """phi(n), mu(n), Lambda(n), omega(n) in one record, n >= 1."""
    if n < 1:
        raise DomainError(f"arithmetic_functions expects n >= 1, got {n}")
    return ArithRecord(
        n=n,
        phi=primes.euler_phi(n),
        mu=primes.moebius(n),
        von_mangoldt=primes.von_mangoldt(n),
        omega=primes.omega(n),
    )
