"""Arithmetic-function oracles: sieve vs Miller-Rabin, brute-force definitions."""

import math

from ps_lab import primes


def test_sieve_matches_miller_rabin():
    table = primes.prime_table(3000)
    for n in range(2, 3001):
        assert bool(table[n]) == primes.is_prime(n), n


def test_primes_up_to_small():
    assert primes.primes_up_to(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert primes.primes_up_to(1) == []


def test_is_prime_large_strong_pseudoprime_candidates():
    # Carmichael numbers and known SPSP-2 composites must be rejected.
    for n in (561, 1105, 1729, 2047, 3215031751, 341550071728321):
        assert not primes.is_prime(n), n
    for p in (2**31 - 1, 999999937, 10**12 + 39):
        assert primes.is_prime(p), p


def test_factorize_recomposes():
    for n in (2, 12, 360, 1024, 9973, 2 * 3 * 5 * 7 * 11 * 13, 10**6 + 3):
        out = primes.factorize(n)
        prod = 1
        for p, e in out:
            assert primes.is_prime(p)
            prod *= p**e
        assert prod == n


def test_divisors_by_brute_force():
    for n in (1, 2, 28, 360, 97, 5040):
        assert primes.divisors(n) == [d for d in range(1, n + 1) if n % d == 0]


def test_euler_phi_by_gcd_count():
    for n in range(1, 200):
        assert primes.euler_phi(n) == sum(1 for a in range(1, n + 1) if math.gcd(a, n) == 1)


def test_moebius_by_squarefree_definition():
    for n in range(1, 300):
        fac = primes.factorize(n) if n > 1 else []
        if any(e > 1 for _, e in fac):
            assert primes.moebius(n) == 0, n
        else:
            assert primes.moebius(n) == (-1) ** len(fac), n


def test_von_mangoldt_chebyshev_identity():
    # sum_{d | n} Lambda(d) = log n, exactly the defining property.
    for n in (1, 2, 16, 30, 97, 360, 1024, 5040):
        total = sum(primes.von_mangoldt(d) for d in primes.divisors(n))
        assert abs(total - math.log(n)) < 1e-10, n


def test_von_mangoldt_zero_off_prime_powers():
    assert primes.von_mangoldt(1) == 0.0
    assert primes.von_mangoldt(6) == 0.0
    assert abs(primes.von_mangoldt(9) - math.log(3)) < 1e-12
    assert abs(primes.von_mangoldt(8) - math.log(2)) < 1e-12


def test_omega_counts_distinct_primes():
    assert primes.omega(1) == 0
    assert primes.omega(12) == 2
    assert primes.omega(30030) == 6
