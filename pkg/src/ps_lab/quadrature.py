"""Quadrature engine for the oscillatory integrals of the circle method.

The integrals handled here all have the linear-phase form

    integral over [a, b] of  amp(y) e(z y) dy,     e(t) = exp(2 pi i t),

with a smooth, positive, eventually decreasing amplitude (after the y = x^k
substitution the circle-method integrals I and J become exactly this, with
amp(y) proportional to y^(beta-1) or y^(beta-1)/log y).  Strategy:

* cut [a, b] at the half-period points y_j = j/(2z), where e(zy) changes
  sign pattern; integrate each panel with adaptive Gauss-Kronrod (G7/K15);
* evaluate panels in *local* coordinates: on panel j the phase factor is
  (-1)^j e(z u) with 0 <= z u <= 1/2, so no large-argument phase is ever fed
  to the complex exponential;
* when the panel count is large, treat the integral as a difference of two
  tails integral(a, infinity) - integral(b, infinity) and sum each tail's
  alternating panel series with repeated averaging (Euler transform);
* an algebraic endpoint singularity y^(beta-1) at y = 0 is removed by the
  substitution w = y^beta, which maps the head integral to a smooth one.
"""

from __future__ import annotations

import cmath
import math
from typing import Callable

import numpy as np

from .errors import QuadratureNotConverged

# Gauss 7 / Kronrod 15 nodes and weights on [-1, 1] (QUADPACK dqk15 tables).
_K15_NODES = np.array(
    [
        -0.991455371120813,
        -0.949107912342759,
        -0.864864423359769,
        -0.741531185599394,
        -0.586087235467691,
        -0.405845151377397,
        -0.207784955007898,
        0.0,
        0.207784955007898,
        0.405845151377397,
        0.586087235467691,
        0.741531185599394,
        0.864864423359769,
        0.949107912342759,
        0.991455371120813,
    ]
)
_K15_WEIGHTS = np.array(
    [
        0.022935322010529,
        0.063092092629979,
        0.104790010322250,
        0.140653259715525,
        0.169004726639267,
        0.190350578064785,
        0.204432940075298,
        0.209482141084728,
        0.204432940075298,
        0.190350578064785,
        0.169004726639267,
        0.140653259715525,
        0.104790010322250,
        0.063092092629979,
        0.022935322010529,
    ]
)
_G7_WEIGHTS = np.array(
    [
        0.129484966168870,
        0.279705391489277,
        0.381830050505119,
        0.417959183673469,
        0.381830050505119,
        0.279705391489277,
        0.129484966168870,
    ]
)
_G7_INDEX = np.array([1, 3, 5, 7, 9, 11, 13])

ArrayFunc = Callable[[np.ndarray], np.ndarray]


def _gk15(f: ArrayFunc, a: float, b: float) -> tuple[complex, float]:
    """One Gauss-Kronrod 7/15 evaluation on [a, b]: (K15 value, |K15-G7|)."""
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    fy = np.asarray(f(mid + half * _K15_NODES), dtype=complex)
    k15 = half * np.sum(_K15_WEIGHTS * fy)
    g7 = half * np.sum(_G7_WEIGHTS * fy[_G7_INDEX])
    return complex(k15), abs(k15 - g7)


def adaptive_gk(
    f: ArrayFunc, a: float, b: float, tol: float, max_depth: int = 30
) -> tuple[complex, float]:
    """Adaptive G7/K15 on [a, b] with absolute error target tol.

    f must accept a numpy array of abscissae.  Returns (value, error
    estimate); raises QuadratureNotConverged if a subinterval bottoms out
    above its share of the tolerance.
    """
    if a == b:
        return 0j, 0.0
    total = 0j
    err_total = 0.0
    stack = [(a, b, tol, 0)]
    while stack:
        lo, hi, budget, depth = stack.pop()
        val, err = _gk15(f, lo, hi)
        if err <= budget or err <= 1e-16 * (1.0 + abs(val)):
            total += val
            err_total += err
        elif depth >= max_depth:
            raise QuadratureNotConverged(
                f"adaptive_gk stalled on [{lo}, {hi}] with error {err} > {budget}"
            )
        else:
            mid = 0.5 * (lo + hi)
            stack.append((lo, mid, budget / 2, depth + 1))
            stack.append((mid, hi, budget / 2, depth + 1))
    return total, err_total


def _euler_limit(partials: np.ndarray) -> tuple[complex, float]:
    """Accelerated limit of a sequence of partial sums of an alternating
    series, by repeated adjacent averaging; returns (limit, error estimate)."""
    arr = np.asarray(partials, dtype=complex)
    prev = complex(arr[-1])
    while arr.size > 1:
        arr = 0.5 * (arr[:-1] + arr[1:])
        cur = complex(arr[-1])
        est = abs(cur - prev)
        prev = cur
    return prev, est


class LinearPhaseIntegrator:
    """integral over [a, b] (b may be inf) of amp(y) e(z y) dy for z > 0."""

    # Panels are half-periods; beyond this many, switch to tail acceleration.
    # The Euler transform needs the panel envelope to vary slowly, so a run
    # of panels is summed directly before acceleration starts.
    DIRECT_PANEL_LIMIT = 96
    TAIL_HEAD_PANELS = 24
    TAIL_EULER_PANELS = 48

    def __init__(self, amp: ArrayFunc, z: float, tol: float):
        assert z > 0
        self.amp = amp
        self.z = z
        self.half = 1.0 / (2.0 * z)
        self.tol = tol

    def _panel(self, j: int, ptol: float) -> tuple[complex, float]:
        """Panel [j, j+1] half-periods, in local coordinates u = y - j/(2z)."""
        y0 = j * self.half
        sign = -1.0 if j % 2 else 1.0
        z = self.z

        def f(u: np.ndarray) -> np.ndarray:
            return self.amp(y0 + u) * np.exp(2j * np.pi * z * u)

        val, err = adaptive_gk(f, 0.0, self.half, ptol)
        return sign * val, err

    def _partial(self, lo: float, hi: float, ptol: float) -> tuple[complex, float]:
        """Any subinterval [lo, hi]; global phase anchored at lo."""
        z = self.z
        anchor = cmath.exp(2j * np.pi * math.fmod(z * lo, 1.0))

        def f(u: np.ndarray) -> np.ndarray:
            return self.amp(lo + u) * np.exp(2j * np.pi * z * u)

        val, err = adaptive_gk(f, 0.0, hi - lo, ptol)
        return anchor * val, err

    def _tail(self, j_start: int) -> tuple[complex, float]:
        """Sum of all panels j >= j_start out to infinity (amp -> 0)."""
        ptol = self.tol / (4 * self.TAIL_EULER_PANELS)
        head = 0j
        err = 0.0
        j = j_start
        for _ in range(self.TAIL_HEAD_PANELS):
            v, e = self._panel(j, ptol)
            head += v
            err += e
            j += 1
        terms = []
        for _ in range(self.TAIL_EULER_PANELS):
            v, e = self._panel(j, ptol)
            terms.append(v)
            err += e
            j += 1
        limit, euler_err = _euler_limit(np.cumsum(terms))
        return head + limit, err + euler_err

    def integrate(self, a: float, b: float) -> tuple[complex, float]:
        """integral over [a, b], finite b."""
        j_lo = math.ceil(2 * self.z * a)
        j_hi = math.floor(2 * self.z * b)
        if j_hi * self.half == b:
            j_hi -= 1  # keep the final partial panel nonempty in edge cases
        if j_lo >= j_hi:
            return self._partial(a, b, self.tol)
        n_panels = j_hi - j_lo
        total = 0j
        err = 0.0
        if n_panels <= self.DIRECT_PANEL_LIMIT:
            if a < j_lo * self.half:
                v, e = self._partial(a, j_lo * self.half, self.tol / (n_panels + 2))
                total += v
                err += e
            ptol = self.tol / (n_panels + 2)
            for j in range(j_lo, j_hi):
                v, e = self._panel(j, ptol)
                total += v
                err += e
            v, e = self._partial(j_hi * self.half, b, self.tol / (n_panels + 2))
            total += v
            err += e
            return total, err
        # Tail mode: integral(a,b) = integral(a,inf) - integral(b,inf), and
        # integral(b,inf) = tail(j_hi) - integral(y_{j_hi}, b).
        if a < j_lo * self.half:
            v, e = self._partial(a, j_lo * self.half, self.tol / 4)
            total += v
            err += e
        tail_a, err_a = self._tail(j_lo)
        v, e = self._partial(j_hi * self.half, b, self.tol / 4)
        tail_b, err_b = self._tail(j_hi)
        return total + tail_a + v - tail_b, err + err_a + e + err_b


def oscillatory_integral(
    amp: ArrayFunc,
    a: float,
    b: float,
    z: float,
    tol: float,
    singular_beta: float | None = None,
    smooth_factor: ArrayFunc | None = None,
) -> complex:
    """integral over [a, b] of amp(y) e(z y) dy, any real z.

    If singular_beta is given then a == 0 and amp(y) = y^(beta-1) * s(y) with
    s = smooth_factor bounded near 0.  The head up to the first half-period
    point is computed under the substitution w = y^beta, which turns
    amp(y) dy into s(w^(1/beta)) dw / beta -- smooth, no endpoint blow-up.
    Raises QuadratureNotConverged when the error estimate exceeds tol.
    """
    if z < 0:
        return oscillatory_integral(
            amp, a, b, -z, tol, singular_beta, smooth_factor
        ).conjugate()

    total = 0j
    err = 0.0
    if singular_beta is not None:
        if a != 0.0 or smooth_factor is None:
            raise ValueError(
                "singular_beta requires a == 0 and an explicit smooth_factor"
            )
        beta = singular_beta
        head_end = b if z == 0.0 else min(b, 1.0 / (2.0 * z))

        def head_f(w: np.ndarray) -> np.ndarray:
            y = w ** (1.0 / beta)
            return smooth_factor(y) / beta * np.exp(2j * np.pi * z * y)

        v, e = adaptive_gk(head_f, 0.0, head_end**beta, tol / 4)
        total += v
        err += e
        if head_end == b:
            if err > tol:
                raise QuadratureNotConverged(f"error estimate {err} > {tol}")
            return total
        a = head_end

    if z == 0.0:
        v, e = adaptive_gk(lambda y: amp(y) + 0j, a, b, tol / 2)
        total += v
        err += e
    else:
        integ = LinearPhaseIntegrator(amp, z, tol / 2)
        v, e = integ.integrate(a, b)
        total += v
        err += e
    if err > tol:
        raise QuadratureNotConverged(f"error estimate {err} > {tol}")
    return total
