"""Small numerical utilities: bracketed root finding, golden-section
minimization, natural cubic splines, and finite-difference stencils.

Nothing here knows about geometry; everything is deterministic.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from collections.abc import Callable, Sequence

import numpy as np

from .errors import NumericalError

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0  # 1/phi
_INVPHI2 = (3.0 - math.sqrt(5.0)) / 2.0  # 1/phi^2


def golden_min(f: Callable[[float], float], a: float, b: float,
               tol: float = 1e-12, max_iter: int = 200) -> tuple[float, float]:
    """Minimize a unimodal function on [a, b].

    Returns (argmin, min).  Tolerance is on the bracket width.
    """
    if b < a:
        a, b = b, a
    h = b - a
    if h <= tol:
        x = 0.5 * (a + b)
        return x, f(x)
    c = a + _INVPHI2 * h
    d = a + _INVPHI * h
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if h <= tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            h = b - a
            c = a + _INVPHI2 * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + _INVPHI * h
            fd = f(d)
    if fc < fd:
        return c, fc
    return d, fd


def bracket_root(f: Callable[[float], float], a: float, b: float,
                 fa: float | None = None, fb: float | None = None,
                 tol: float = 1e-14, max_iter: int = 200) -> float:
    """Root of a continuous function with a sign change on [a, b].

    Bisection with a secant acceleration step; always keeps the bracket, so
    convergence is unconditional.
    """
    fa = f(a) if fa is None else fa
    fb = f(b) if fb is None else fb
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0.0:
        raise NumericalError(f"no sign change on [{a}, {b}]")
    for _ in range(max_iter):
        if abs(b - a) <= tol * (1.0 + abs(a) + abs(b)):
            break
        # secant candidate, fall back to midpoint if it leaves the bracket
        denom = fb - fa
        x = 0.5 * (a + b)
        if denom != 0.0:
            xs = b - fb * (b - a) / denom
            if a < xs < b:
                x = xs
        fx = f(x)
        if fx == 0.0:
            return x
        if fa * fx < 0.0:
            b, fb = x, fx
        else:
            a, fa = x, fx
    return 0.5 * (a + b)


class CubicSpline1D:
    """Natural cubic spline through (x, y) knots, with first derivative."""

    def __init__(self, xs: Sequence[float], ys: Sequence[float]):
        x = np.asarray(xs, dtype=float)
        y = np.asarray(ys, dtype=float)
        if x.ndim != 1 or x.shape != y.shape or len(x) < 2:
            raise NumericalError("spline needs two or more (x, y) knots")
        if np.any(np.diff(x) <= 0.0):
            raise NumericalError("spline knots must be strictly increasing")
        n = len(x)
        h = np.diff(x)
        m = np.zeros(n)
        if n > 2:
            # tridiagonal system for interior second derivatives, natural ends
            a = np.zeros((n - 2, n - 2))
            rhs = np.zeros(n - 2)
            for i in range(1, n - 1):
                k = i - 1
                a[k, k] = 2.0 * (h[i - 1] + h[i])
                if k > 0:
                    a[k, k - 1] = h[i - 1]
                if k < n - 3:
                    a[k, k + 1] = h[i]
                rhs[k] = 6.0 * ((y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1])
            m[1:-1] = np.linalg.solve(a, rhs)
        self.x, self.y, self.h, self.m = x, y, h, m

    def _segment(self, t: float) -> int:
        i = bisect_right(self.x.tolist(), t) - 1
        return min(max(i, 0), len(self.x) - 2)

    def __call__(self, t: float) -> float:
        i = self._segment(t)
        x, y, h, m = self.x, self.y, self.h, self.m
        dx = t - x[i]
        dx1 = x[i + 1] - t
        return (m[i] * dx1 ** 3 + m[i + 1] * dx ** 3) / (6.0 * h[i]) \
            + (y[i] / h[i] - m[i] * h[i] / 6.0) * dx1 \
            + (y[i + 1] / h[i] - m[i + 1] * h[i] / 6.0) * dx

    def deriv(self, t: float) -> float:
        i = self._segment(t)
        x, y, h, m = self.x, self.y, self.h, self.m
        dx = t - x[i]
        dx1 = x[i + 1] - t
        return (-m[i] * dx1 ** 2 + m[i + 1] * dx ** 2) / (2.0 * h[i]) \
            - (y[i] / h[i] - m[i] * h[i] / 6.0) \
            + (y[i + 1] / h[i] - m[i + 1] * h[i] / 6.0)


def central_diff_1(values: np.ndarray, h: float) -> np.ndarray:
    """First derivative of uniformly sampled values, matching array length.

    Fourth-order centered stencil in the interior (falling back to
    second-order near the ends, one-sided at the very ends).
    """
    v = np.asarray(values, dtype=float)
    n = v.shape[0]
    if n < 3:
        raise NumericalError("need at least 3 samples to differentiate")
    d = np.empty_like(v)
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h)
    d[-1] = (3.0 * v[-1] - 4.0 * v[-2] + v[-3]) / (2.0 * h)
    d[1:-1] = (v[2:] - v[:-2]) / (2.0 * h)
    if n >= 5:
        d[2:-2] = (v[:-4] - 8.0 * v[1:-3] + 8.0 * v[3:-1] - v[4:]) / (12.0 * h)
    return d


def second_diff(values: np.ndarray, h: float) -> np.ndarray:
    """Second difference of uniformly sampled values (interior points only)."""
    v = np.asarray(values, dtype=float)
    if v.shape[0] < 3:
        raise NumericalError("need at least 3 samples for a second difference")
    return (v[2:] - 2.0 * v[1:-1] + v[:-2]) / (h * h)


def affine_fit(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    """Least-squares fit y = a*x + b.  Returns (a, b, rms residual)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xm, ym = x.mean(), y.mean()
    dx = x - xm
    denom = float(dx @ dx)
    if denom == 0.0:
        raise NumericalError("affine fit needs at least two distinct abscissae")
    a = float(dx @ (y - ym)) / denom
    b = ym - a * xm
    r = y - (a * x + b)
    rms = math.sqrt(float(r @ r) / len(x))
    return a, b, rms
