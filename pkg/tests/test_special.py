"""Gamma implementation vs math.gamma and the reflection identity."""

import math

import pytest

from ps_lab.special import gamma


def test_matches_math_gamma_on_grid():
    x = 0.05
    while x < 20.0:
        rel = abs(gamma(x) - math.gamma(x)) / math.gamma(x)
        assert rel < 1e-12, x
        x += 0.05


def test_half_integer_values():
    assert abs(gamma(0.5) - math.sqrt(math.pi)) < 1e-14
    assert abs(gamma(1.5) - 0.5 * math.sqrt(math.pi)) < 1e-14


def test_integer_factorials():
    for n in range(1, 12):
        assert abs(gamma(n) - math.factorial(n - 1)) < 1e-9 * math.factorial(n - 1)


def test_reflection_formula():
    for x in (0.1, 0.25, 0.3, 0.7, 0.9, -0.5, -1.3, -2.7):
        lhs = gamma(x) * gamma(1.0 - x)
        rhs = math.pi / math.sin(math.pi * x)
        assert abs(lhs - rhs) <= 1e-10 * abs(rhs), x


def test_poles_rejected():
    for x in (0.0, -1.0, -2.0, -7.0):
        with pytest.raises(ValueError):
            gamma(x)
