"""Elementary prime machinery: sieve, deterministic primality, factorization.

Everything here works on plain Python integers at desk scale.  The sieve is
cached and grown on demand so that repeated calls (prime enumeration, PS-prime
filtering, von Mangoldt evaluation) do not resieve from scratch.
"""

from __future__ import annotations

import math

from .errors import BudgetExceeded

# The sieve cache is never grown past this; larger primality queries fall
# back to the deterministic Miller-Rabin test below.
SIEVE_CACHE_CAP = 10_000_000

_sieve_limit = 0
_composite = bytearray()  # _composite[n] == 1  <=>  n is composite (n >= 2)


def _ensure_sieve(limit: int) -> None:
    global _sieve_limit, _composite
    if limit <= _sieve_limit:
        return
    if limit > SIEVE_CACHE_CAP:
        raise BudgetExceeded(
            f"sieve request {limit} exceeds cache cap {SIEVE_CACHE_CAP}"
        )
    # Grow geometrically so interleaved growing requests stay linear overall.
    limit = min(max(limit, 2 * _sieve_limit, 1 << 16), SIEVE_CACHE_CAP)
    comp = bytearray(limit + 1)
    comp[0:2] = b"\x01\x01"
    for p in range(2, math.isqrt(limit) + 1):
        if not comp[p]:
            comp[p * p :: p] = b"\x01" * len(range(p * p, limit + 1, p))
    _sieve_limit = limit
    _composite = comp


def primes_up_to(limit: int) -> list[int]:
    """All primes p <= limit, increasing."""
    if limit < 2:
        return []
    _ensure_sieve(limit)
    return [n for n in range(2, limit + 1) if not _composite[n]]


def prime_table(limit: int) -> bytearray:
    """Lookup table t with t[n] == 1 iff n is prime, for 0 <= n <= limit."""
    _ensure_sieve(max(limit, 2))
    t = bytearray(limit + 1)
    for n in range(2, limit + 1):
        t[n] = 1 - _composite[n]
    return t


# Deterministic witness set for Miller-Rabin: correct for all n < 3.3 * 10^24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic primality test (sieve lookup when cached, else Miller-Rabin)."""
    if n < 2:
        return False
    if n <= _sieve_limit:
        return not _composite[n]
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of n >= 1 as [(p, e), ...] with p increasing."""
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    out: list[tuple[int, int]] = []
    m = n
    for p in primes_up_to(min(math.isqrt(n), SIEVE_CACHE_CAP)):
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
    if m > 1:
        out.append((m, 1))
    return out


def divisors(n: int) -> list[int]:
    """All positive divisors of n, increasing."""
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**j for d in divs for j in range(e + 1)]
    return sorted(divs)


def euler_phi(n: int) -> int:
    """Euler totient of n >= 1."""
    phi = 1
    for p, e in factorize(n):
        phi *= (p - 1) * p ** (e - 1)
    return phi


def moebius(n: int) -> int:
    """Moebius function of n >= 1."""
    mu = 1
    for _, e in factorize(n):
        if e > 1:
            return 0
        mu = -mu
    return mu


def von_mangoldt(n: int) -> float:
    """Von Mangoldt function: log p when n is a prime power p^e, else 0."""
    if n < 2:
        return 0.0
    fac = factorize(n)
    if len(fac) == 1:
        return math.log(fac[0][0])
    return 0.0


def omega(n: int) -> int:
    """Number of distinct prime divisors of n >= 1."""
    return len(factorize(n))
