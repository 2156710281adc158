"""The hyperbolic plane as the upper hyperboloid sheet in R^{2,1}.

Points satisfy <v, v> = -1, v.x0 >= 1; tangent vectors at p satisfy
<w, p> = 0 and are spacelike.  Geodesics, distance and the tangential
projection are closed form:

    exp_p(s v) = cosh(s) p + sinh(s) v          (v unit)
    d(p, q)    = arccosh(-<p, q>)
    proj_p(w)  = w + <w, p> p

The covariant derivative along a curve is the tangential projection of the
coordinate derivative (Gauss formula for the hyperboloid; the position vector
is the unit normal).  Curves with prescribed geodesic curvature are produced
by integrating the ambient frame system

    alpha' = T,   T' = k_g n + alpha,   n' = -k_g T

with a classical fourth-order Runge-Kutta step and re-enforcement of the
quadratic constraints after every step.  The frame is right-handed:
n = alpha x T in the Minkowski cross product, so positive k_g turns the
curve toward n.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from .errors import (BadCurvatureFunction, InsufficientSamples, NonUnitTangent,
                     NumericalError, OutOfDomain)
from .minkowski import (SpacetimeVec, Triple, _madd, _mcomb, _mcross, _mdot,
                        _mscale, _msub, _normalize_point, _normalize_spacelike,
                        _project_tangent, minkowski_inner)
from .numerics import CubicSpline1D, golden_min

POINT_TOL = 1e-10      # |<v,v> + 1| for points
TANGENT_TOL = 1e-10    # |<w,p>| for tangency
UNIT_TOL = 1e-8        # |<w,w> - 1| for unit vectors

ORIGIN_T: Triple = (1.0, 0.0, 0.0)


@dataclass(frozen=True, slots=True)
class H2Point:
    """Point on the upper sheet of the hyperboloid.

    The constraint residual is checked relative to the coordinate scale:
    at double precision the residual of <v, v> = -1 necessarily grows like
    the square of the coordinates, while distances stay relatively accurate.
    Near the origin the bound coincides with the absolute 1e-10 tolerance.
    """

    v: SpacetimeVec

    def __post_init__(self):
        q = minkowski_inner(self.v, self.v)
        if abs(q + 1.0) > POINT_TOL * (1.0 + self.v.x0 * self.v.x0):
            raise NumericalError(f"<v,v> = {q}, not on the hyperboloid")
        if self.v.x0 < 1.0 - POINT_TOL:
            raise NumericalError("point not on the upper sheet")

    @property
    def tup(self) -> Triple:
        return self.v.tup

    @classmethod
    def of(cls, t: Triple) -> "H2Point":
        return cls(SpacetimeVec.of(t))


@dataclass(frozen=True, slots=True)
class H2Tangent:
    """Tangent vector of the hyperbolic plane at a base point."""

    base: H2Point
    w: SpacetimeVec

    def __post_init__(self):
        c = minkowski_inner(self.w, self.base.v)
        scale = (1.0 + self.base.v.x0 * self.base.v.x0) \
            * (1.0 + max(abs(self.w.x0), abs(self.w.x1), abs(self.w.x2)))
        if abs(c) > TANGENT_TOL * 100.0 * scale:
            raise NumericalError(f"<w,p> = {c}, not tangent")
        if minkowski_inner(self.w, self.w) < -1e-10 * scale:
            raise NumericalError("tangent vector is timelike")

    @property
    def tup(self) -> Triple:
        return self.w.tup

    def norm(self) -> float:
        return math.sqrt(max(0.0, minkowski_inner(self.w, self.w)))


ORIGIN = H2Point.of(ORIGIN_T)


def h2_project_tangent(p: H2Point, w: SpacetimeVec) -> H2Tangent:
    """Tangential projection w + <w, p> p at p."""
    return H2Tangent(p, SpacetimeVec.of(_project_tangent(p.tup, w.tup)))


def h2_exp(p: H2Point, v: H2Tangent, s: float) -> H2Point:
    """Geodesic flow: the point at arclength s along the unit direction v."""
    if not math.isfinite(s):
        raise NumericalError(f"non-finite arclength {s}")
    q = minkowski_inner(v.w, v.w)
    if abs(q - 1.0) > UNIT_TOL:
        raise NonUnitTangent(f"<v,v> = {q}, expected a unit tangent")
    return H2Point.of(_exp_raw(p.tup, v.tup, s))


def _exp_raw(p: Triple, v: Triple, s: float) -> Triple:
    return _mcomb(math.cosh(s), p, math.sinh(s), v)


def h2_dist(p: H2Point, q: H2Point) -> float:
    """Geodesic distance arccosh(-<p, q>), clamped against roundoff."""
    return _dist_raw(p.tup, q.tup)


def _dist_raw(p: Triple, q: Triple) -> float:
    return math.acosh(max(1.0, -_mdot(p, q)))


# -- curves -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class H2Curve:
    """Arclength-sampled curve, with dense evaluation between samples.

    ``interpolation`` selects the dense-output rule:

    * ``"rk4"`` - re-integrate the frame system from the nearest sample
      (available when the curve was built from a curvature function);
    * ``"hermite"`` - cubic Hermite on positions and tangents, re-projected
      onto the hyperboloid.

    ``normals`` and ``kg`` are optional per-sample diagnostics (Frenet normal
    and signed geodesic curvature); integrated and recovered curves carry
    them, hand-built sample curves need not.  Curves compare by identity so
    dense evaluations can be memoized.
    """

    s: np.ndarray
    points: np.ndarray
    tangents: np.ndarray
    interpolation: str
    normals: np.ndarray | None = None
    kg: np.ndarray | None = None
    kg_fn: Callable[[float], float] | None = field(default=None, repr=False)
    _frame_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float)
        if s.ndim != 1 or len(s) < 2:
            raise InsufficientSamples("a curve needs at least two samples")
        if np.any(np.diff(s) <= 0.0):
            raise NumericalError("sample arclengths must be strictly increasing")
        tt = -self.tangents[:, 0] ** 2 + self.tangents[:, 1] ** 2 + self.tangents[:, 2] ** 2
        if np.max(np.abs(tt - 1.0)) > UNIT_TOL:
            raise NumericalError("curve samples are not unit speed")
        if self.interpolation not in ("rk4", "hermite"):
            raise NumericalError(f"unknown interpolation rule {self.interpolation!r}")
        if self.interpolation == "rk4" and (self.kg_fn is None or self.normals is None):
            raise NumericalError("rk4 interpolation needs the curvature function and normals")

    # construction --------------------------------------------------------

    @classmethod
    def from_samples(cls, s, points, tangents, normals=None, kg=None,
                     interpolation: str = "hermite") -> "H2Curve":
        return cls(np.asarray(s, float), np.asarray(points, float),
                   np.asarray(tangents, float), interpolation,
                   None if normals is None else np.asarray(normals, float),
                   None if kg is None else np.asarray(kg, float))

    # geometry ------------------------------------------------------------

    @property
    def s_min(self) -> float:
        return float(self.s[0])

    @property
    def s_max(self) -> float:
        return float(self.s[-1])

    @property
    def step(self) -> float:
        return float(self.s[1] - self.s[0])

    def uniform_step(self) -> float:
        """Sample spacing, requiring near-uniformity (finite-difference
        stencils on the samples assume it)."""
        d = np.diff(self.s)
        if (d.max() - d.min()) > 0.01 * d.mean():
            raise NumericalError("curve samples are not uniformly spaced")
        return float(d.mean())

    def _locate(self, s: float) -> int:
        if s < self.s_min - 1e-9 or s > self.s_max + 1e-9:
            raise OutOfDomain(f"s = {s} outside [{self.s_min}, {self.s_max}]")
        i = int(np.searchsorted(self.s, s, side="right")) - 1
        return min(max(i, 0), len(self.s) - 2)

    def frame_at(self, s: float) -> tuple[Triple, Triple, Triple, float]:
        """Position, tangent, Frenet normal and curvature at arclength s.

        Memoized per parameter value; dense consumers (chart jets, tracers)
        hit the same arclength many times.
        """
        hit = self._frame_cache.get(s)
        if hit is not None:
            return hit
        i = self._locate(s)
        if self.interpolation == "rk4":
            ds = s - float(self.s[i])
            a = tuple(self.points[i])
            t = tuple(self.tangents[i])
            n = tuple(self.normals[i])
            if ds != 0.0:
                a, t, n = _frenet_rk4_step(a, t, n, float(self.s[i]), ds, self.kg_fn)
                a, t, n = _reproject_frame(a, t, n)
            out = (a, t, n, float(self.kg_fn(s)))
        else:
            a, t = self._hermite(i, s)
            n = _mcross(a, t)
            kg = float(np.interp(s, self.s, self.kg)) if self.kg is not None else math.nan
            out = (a, t, n, kg)
        if len(self._frame_cache) < 65536:
            self._frame_cache[s] = out
        return out

    def _hermite(self, i: int, s: float) -> tuple[Triple, Triple]:
        s0, s1 = float(self.s[i]), float(self.s[i + 1])
        h = s1 - s0
        t = (s - s0) / h
        p0, p1 = self.points[i], self.points[i + 1]
        m0, m1 = self.tangents[i] * h, self.tangents[i + 1] * h
        t2, t3 = t * t, t * t * t
        pos = ((2 * t3 - 3 * t2 + 1) * p0 + (t3 - 2 * t2 + t) * m0
               + (-2 * t3 + 3 * t2) * p1 + (t3 - t2) * m1)
        vel = ((6 * t2 - 6 * t) * p0 + (3 * t2 - 4 * t + 1) * m0
               + (-6 * t2 + 6 * t) * p1 + (3 * t2 - 2 * t) * m1) / h
        a = _normalize_point(tuple(pos))
        tv = _normalize_spacelike(_project_tangent(a, tuple(vel)))
        return a, tv

    def eval(self, s: float) -> tuple[H2Point, H2Tangent]:
        a, t, _, _ = self.frame_at(s)
        p = H2Point.of(a)
        return p, H2Tangent(p, SpacetimeVec.of(t))


# -- frame integration --------------------------------------------------------

def _frenet_rhs(a: Triple, t: Triple, n: Triple, k: float):
    da = t
    dt = _madd(_mscale(k, n), a)
    dn = _mscale(-k, t)
    return da, dt, dn


def _frenet_rk4_step(a, t, n, s, h, kfn):
    k1 = _frenet_rhs(a, t, n, kfn(s))
    mid = kfn(s + 0.5 * h)
    a2 = _madd(a, _mscale(0.5 * h, k1[0]))
    t2 = _madd(t, _mscale(0.5 * h, k1[1]))
    n2 = _madd(n, _mscale(0.5 * h, k1[2]))
    k2 = _frenet_rhs(a2, t2, n2, mid)
    a3 = _madd(a, _mscale(0.5 * h, k2[0]))
    t3 = _madd(t, _mscale(0.5 * h, k2[1]))
    n3 = _madd(n, _mscale(0.5 * h, k2[2]))
    k3 = _frenet_rhs(a3, t3, n3, mid)
    a4 = _madd(a, _mscale(h, k3[0]))
    t4 = _madd(t, _mscale(h, k3[1]))
    n4 = _madd(n, _mscale(h, k3[2]))
    k4 = _frenet_rhs(a4, t4, n4, kfn(s + h))
    c = h / 6.0
    a_new = _madd(a, _mscale(c, _madd(_madd(k1[0], _mscale(2.0, k2[0])),
                                      _madd(_mscale(2.0, k3[0]), k4[0]))))
    t_new = _madd(t, _mscale(c, _madd(_madd(k1[1], _mscale(2.0, k2[1])),
                                      _madd(_mscale(2.0, k3[1]), k4[1]))))
    n_new = _madd(n, _mscale(c, _madd(_madd(k1[2], _mscale(2.0, k2[2])),
                                      _madd(_mscale(2.0, k3[2]), k4[2]))))
    return a_new, t_new, n_new


def _reproject_frame(a: Triple, t: Triple, n: Triple):
    a = _normalize_point(a)
    t = _normalize_spacelike(_project_tangent(a, t))
    n = _project_tangent(a, n)
    n = _msub(n, _mscale(_mdot(n, t), t))
    n = _normalize_spacelike(n)
    return a, t, n


def curve_from_curvature(k_g: Callable[[float], float], s_range: tuple[float, float],
                         step: float, start: H2Point | None = None,
                         direction: H2Tangent | None = None) -> H2Curve:
    """Unit-speed curve with prescribed signed geodesic curvature.

    The curve starts at ``start`` (origin by default) heading along
    ``direction``; k_g is signed with respect to the right-handed Frenet
    normal.  Samples land on a uniform grid covering s_range.
    """
    s0, s1 = float(s_range[0]), float(s_range[1])
    if not (math.isfinite(s0) and math.isfinite(s1)) or s1 <= s0:
        raise OutOfDomain(f"bad arclength range {s_range}")
    if step <= 0.0:
        raise NumericalError("step must be positive")
    a = (start or ORIGIN).tup
    if direction is None:
        t = (0.0, 1.0, 0.0) if start is None else _normalize_spacelike(
            _project_tangent(a, (0.0, 1.0, 0.0)))
    else:
        if abs(minkowski_inner(direction.w, direction.w) - 1.0) > UNIT_TOL:
            raise NonUnitTangent("curve direction must be unit")
        t = direction.tup
    n = _mcross(a, t)

    def kfn(s: float) -> float:
        k = k_g(s)
        if not math.isfinite(k):
            raise BadCurvatureFunction(f"k_g({s}) = {k}")
        return float(k)

    n_steps = max(1, math.ceil((s1 - s0) / step - 1e-12))
    h = (s1 - s0) / n_steps
    svals = np.empty(n_steps + 1)
    pts = np.empty((n_steps + 1, 3))
    tts = np.empty((n_steps + 1, 3))
    nns = np.empty((n_steps + 1, 3))
    kgs = np.empty(n_steps + 1)
    svals[0], pts[0], tts[0], nns[0], kgs[0] = s0, a, t, n, kfn(s0)
    s = s0
    for i in range(1, n_steps + 1):
        a, t, n = _frenet_rk4_step(a, t, n, s, h, kfn)
        a, t, n = _reproject_frame(a, t, n)
        s = s0 + i * h
        svals[i], pts[i], tts[i], nns[i], kgs[i] = s, a, t, n, kfn(s)
    return H2Curve(svals, pts, tts, "rk4", nns, kgs, kfn)


# -- covariant differentiation along curves ------------------------------------

def h2_covariant_deriv(curve: H2Curve, fld, s: float) -> H2Tangent:
    """Covariant derivative of a vector field along the curve at arclength s.

    ``fld`` is either an (N, 3) array aligned with the curve samples or a
    callable s -> SpacetimeVec.  The coordinate derivative is taken by
    centered differences (five-point on sampled fields, short-step three-point
    on callables) and projected onto the tangent space at the curve point.
    """
    if s < curve.s_min - 1e-9 or s > curve.s_max + 1e-9:
        raise OutOfDomain(f"s = {s} outside [{curve.s_min}, {curve.s_max}]")
    if callable(fld):
        span = min(s - curve.s_min, curve.s_max - s)
        h = min(1e-5 * (1.0 + abs(s)), 0.5 * span)
        if h <= 0.0:
            raise OutOfDomain("s must be interior to the sample range")
        wp = fld(s + h)
        wm = fld(s - h)
        wp = wp.tup if isinstance(wp, SpacetimeVec) else tuple(wp)
        wm = wm.tup if isinstance(wm, SpacetimeVec) else tuple(wm)
        der = _mscale(1.0 / (2.0 * h), _msub(wp, wm))
        a, _, _, _ = curve.frame_at(s)
    else:
        w = np.asarray(fld, dtype=float)
        if w.shape != curve.points.shape:
            raise InsufficientSamples("sampled field must align with the curve samples")
        i = int(np.argmin(np.abs(curve.s - s)))
        n = len(curve.s)
        h = curve.uniform_step()
        if 2 <= i <= n - 3:
            row = (w[i - 2] - 8.0 * w[i - 1] + 8.0 * w[i + 1] - w[i + 2]) / (12.0 * h)
        elif 1 <= i <= n - 2:
            row = (w[i + 1] - w[i - 1]) / (2.0 * h)
        else:
            raise OutOfDomain("s must be interior to the sample range")
        der = tuple(row)
        a = tuple(curve.points[i])
    p = H2Point.of(a)
    return H2Tangent(p, SpacetimeVec.of(_project_tangent(a, der)))


def measure_geodesic_curvature(curve: H2Curve, s: float) -> float:
    """Signed geodesic curvature <D_T T, alpha x T> measured from samples."""
    if curve.interpolation == "rk4":
        def tangent_field(u: float) -> SpacetimeVec:
            _, t, _, _ = curve.frame_at(u)
            return SpacetimeVec.of(t)
        acc = h2_covariant_deriv(curve, tangent_field, s)
        a, t, _, _ = curve.frame_at(s)
    else:
        acc = h2_covariant_deriv(curve, curve.tangents, s)
        i = int(np.argmin(np.abs(curve.s - s)))
        a, t = tuple(curve.points[i]), tuple(curve.tangents[i])
    return _mdot(acc.tup, _mcross(a, t))


def curvature_profile(curve: H2Curve) -> tuple[np.ndarray, np.ndarray]:
    """Signed geodesic curvature at every interior sample (vectorized).

    Returns (s values, curvature values) for samples 2..N-3, using the
    five-point stencil on the sampled tangent field.
    """
    t = curve.tangents
    p = curve.points
    n = len(curve.s)
    if n < 5:
        raise InsufficientSamples("need at least five samples")
    h = curve.uniform_step()
    d = (t[:-4] - 8.0 * t[1:-3] + 8.0 * t[3:-1] - t[4:]) / (12.0 * h)
    pc = p[2:-2]
    tc = t[2:-2]
    c = -(d[:, 0] * pc[:, 0]) + d[:, 1] * pc[:, 1] + d[:, 2] * pc[:, 2]
    acc = d + c[:, None] * pc
    nrm = np.empty_like(tc)
    nrm[:, 0] = -(pc[:, 1] * tc[:, 2] - pc[:, 2] * tc[:, 1])
    nrm[:, 1] = pc[:, 2] * tc[:, 0] - pc[:, 0] * tc[:, 2]
    nrm[:, 2] = pc[:, 0] * tc[:, 1] - pc[:, 1] * tc[:, 0]
    kg = -(acc[:, 0] * nrm[:, 0]) + acc[:, 1] * nrm[:, 1] + acc[:, 2] * nrm[:, 2]
    return curve.s[2:-2].copy(), kg


# -- comparison helpers ---------------------------------------------------------

def point_to_curve_dist(p: H2Point, curve: H2Curve) -> float:
    """Distance from a point to the curve (continuous, not just samples)."""
    pt = np.asarray(p.tup)
    inner = -(curve.points[:, 0] * pt[0]) + curve.points[:, 1] * pt[1] \
        + curve.points[:, 2] * pt[2]
    i = int(np.argmax(inner))  # -<p,q> smallest -> nearest sample
    lo = float(curve.s[max(0, i - 1)])
    hi = float(curve.s[min(len(curve.s) - 1, i + 1)])

    def f(s: float) -> float:
        a, _, _, _ = curve.frame_at(s)
        return _dist_raw(p.tup, a)

    if hi <= lo:
        return f(lo)
    _, d = golden_min(f, lo, hi, tol=1e-12)
    return d


def curve_hausdorff(a: H2Curve, b: H2Curve) -> float:
    """Symmetric Hausdorff distance between two curves (hyperbolic metric)."""
    d1 = max(point_to_curve_dist(H2Point.of(tuple(q)), b) for q in a.points)
    d2 = max(point_to_curve_dist(H2Point.of(tuple(q)), a) for q in b.points)
    return max(d1, d2)


# -- curvature profile factories -----------------------------------------------

def constant_curvature(value: float) -> Callable[[float], float]:
    def k(_s: float) -> float:
        return value
    return k


def linear_curvature(slope: float, intercept: float = 0.0) -> Callable[[float], float]:
    def k(s: float) -> float:
        return slope * s + intercept
    return k


def spline_curvature(knots_s, knots_k) -> Callable[[float], float]:
    return CubicSpline1D(knots_s, knots_k)
