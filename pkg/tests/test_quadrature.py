"""Quadrature engine vs closed forms and high-precision mpmath oracles."""

import math

import mpmath as mp
import numpy as np
import pytest

from ps_lab.errors import QuadratureNotConverged
from ps_lab.quadrature import adaptive_gk, oscillatory_integral

mp.mp.dps = 40


def test_adaptive_gk_exponential():
    val, err = adaptive_gk(np.exp, 0.0, 1.0, 1e-13)
    assert abs(val - (math.e - 1.0)) < 1e-12
    assert err < 1e-12


def test_adaptive_gk_empty_interval():
    val, err = adaptive_gk(np.exp, 2.0, 2.0, 1e-13)
    assert val == 0j and err == 0.0


def test_adaptive_gk_complex_integrand():
    f = lambda x: np.exp(2j * np.pi * 0.7 * x)
    val, _ = adaptive_gk(f, 0.0, 3.0, 1e-12)
    closed = (np.exp(2j * np.pi * 2.1) - 1.0) / (2j * np.pi * 0.7)
    assert abs(val - closed) < 1e-11


def test_adaptive_gk_reports_stall():
    # x^(-0.9) is integrable but defeats a depth-8 dyadic refinement.
    with pytest.raises(QuadratureNotConverged):
        adaptive_gk(lambda x: np.abs(x) ** -0.9, 0.0, 1.0, 1e-12, max_depth=8)


def test_flat_amplitude_closed_form():
    for z in (0.4, 3.7, 55.0):
        val = oscillatory_integral(lambda y: np.ones_like(y), 0.0, 1.0, z, 1e-11)
        closed = (np.exp(2j * np.pi * z) - 1.0) / (2j * np.pi * z)
        assert abs(val - closed) < 1e-9, z


def test_negative_z_is_conjugate():
    amp = lambda y: y**0.3
    plus = oscillatory_integral(amp, 1.0, 40.0, 2.2, 1e-11)
    minus = oscillatory_integral(amp, 1.0, 40.0, -2.2, 1e-11)
    assert abs(minus - np.conj(plus)) < 1e-12


def test_singular_head_against_incomplete_gamma():
    # int_0^N beta y^(beta-1) e(zy) dy = beta (-s)^(-beta) gammainc(beta, 0, -sN),
    # s = 2 pi i z, which mpmath evaluates to full precision.
    beta = (1 / 1.05) / 3
    for z, N in ((0.25, 1000), (-0.02, 10000), (3.0, 500)):
        val = oscillatory_integral(
            lambda y: beta * y ** (beta - 1.0),
            0.0,
            float(N),
            z,
            1e-10,
            singular_beta=beta,
            smooth_factor=lambda y: np.full_like(y, beta),
        )
        s = 2j * mp.pi * z
        oracle = complex(beta * (-s) ** (-mp.mpf(beta)) * mp.gammainc(mp.mpf(beta), 0, -s * N))
        assert abs(val - oracle) / abs(oracle) < 1e-8, (z, N)


def test_long_range_oscillation_against_mpmath_panels():
    # Smooth amplitude, many periods; oracle integrates period by period.
    amp = lambda y: 1.0 / (1.0 + y)
    z = 1.5
    val = oscillatory_integral(amp, 0.0, 30.0, z, 1e-11)
    period = 1.0 / z
    knots = [0.0] + [period * j for j in range(1, int(30.0 / period) + 1)] + [30.0]
    oracle = complex(
        mp.quad(lambda y: mp.e ** (2j * mp.pi * z * y) / (1 + y), knots)
    )
    assert abs(val - oracle) < 1e-9
