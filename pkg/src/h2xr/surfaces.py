"""Parametric surfaces in the product space, evaluated as second-order jets.

A surface is a chart (u, v) -> jet, where the jet carries the point and all
coordinate derivatives through second order.  Differentiation lives here, in
the surface, so the curvature code never needs to know how a preset was
built.  Presets:

* ``make_cylinder`` - vertical surface over a unit-speed generating curve,
  chart (curve arclength) x (height);
* ``make_slice`` - horizontal copy of the hyperbolic plane in geodesic polar
  coordinates (the pole is excluded, polar charts degenerate there);
* ``make_graph`` - height graph over a Fermi chart of the hyperbolic plane;
* ``perturb`` - displace any chart along its unit normal by a bump
  (negative controls for the flatness tests).

Charts must be immersions; every jet checks the Gram determinant of its
first derivatives and the tangency of their horizontal parts.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (ConfigError, NonUnitCurve, NotImmersed, NumericalError,
                     OutOfDomain)
from .hyperbolic import (H2Curve, H2Point, _exp_raw, constant_curvature,
                         curvature_profile, curve_from_curvature,
                         linear_curvature, spline_curvature)
from .minkowski import (SpacetimeVec, Triple, _mcomb, _mcross, _mdot,
                        _mscale, _normalize_spacelike, _project_tangent)
from .product import AmbientVec, ProdPoint

DEFAULT_CYLINDER_HEIGHT = 3.0
DEFAULT_CURVE_STEP = 1e-3
SLICE_INNER_RADIUS = 1e-3
FD_STEP = 1e-4


@dataclass(frozen=True, slots=True)
class ChartDomain:
    """Closed rectangle of chart parameters."""

    u_range: tuple[float, float]
    v_range: tuple[float, float]

    def __post_init__(self):
        for lo, hi in (self.u_range, self.v_range):
            if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
                raise ConfigError(f"bad chart range [{lo}, {hi}]")

    def contains(self, u: float, v: float, slack: float = 1e-9) -> bool:
        return (self.u_range[0] - slack <= u <= self.u_range[1] + slack
                and self.v_range[0] - slack <= v <= self.v_range[1] + slack)

    @property
    def center(self) -> tuple[float, float]:
        return (0.5 * (self.u_range[0] + self.u_range[1]),
                0.5 * (self.v_range[0] + self.v_range[1]))

    @property
    def widths(self) -> tuple[float, float]:
        return (self.u_range[1] - self.u_range[0], self.v_range[1] - self.v_range[0])


@dataclass(frozen=True, slots=True)
class SurfaceJet:
    """Chart point with coordinate derivatives through second order."""

    X: ProdPoint
    Xu: AmbientVec
    Xv: AmbientVec
    Xuu: AmbientVec
    Xuv: AmbientVec
    Xvv: AmbientVec

    def __post_init__(self):
        p = self.X.h.tup
        for w in (self.Xu, self.Xv):
            drift = _mdot(w.htup, p)
            if abs(drift) > 1e-8 * (1.0 + abs(_mdot(w.htup, w.htup))):
                raise NumericalError(f"first derivative not tangent, <w,p> = {drift}")
        e = _mdot(self.Xu.htup, self.Xu.htup) + self.Xu.t ** 2
        g = _mdot(self.Xv.htup, self.Xv.htup) + self.Xv.t ** 2
        f = _mdot(self.Xu.htup, self.Xv.htup) + self.Xu.t * self.Xv.t
        if e * g - f * f <= 1e-12:
            raise NotImmersed(f"Gram determinant {e * g - f * f} too small")


@dataclass(frozen=True)
class Surface:
    """Chart evaluator plus its domain and bookkeeping.

    Evaluators must be pure; concurrent evaluation at distinct chart points
    is part of the contract.
    """

    chart: Callable[[float, float], SurfaceJet]
    domain: ChartDomain
    derivative_mode: str
    label: str
    fd_step: float | None = None

    def jet(self, u: float, v: float) -> SurfaceJet:
        if not self.domain.contains(u, v):
            raise OutOfDomain(f"({u}, {v}) outside chart domain of {self.label}")
        try:
            return self.chart(u, v)
        except OverflowError as exc:
            raise NumericalError(f"overflow evaluating {self.label} at ({u}, {v})") from exc

    def position(self, u: float, v: float) -> ProdPoint:
        return self.jet(u, v).X


def _ambient(h: Triple, t: float) -> AmbientVec:
    return AmbientVec(SpacetimeVec.of(h), t)


def unit_normal(jet: SurfaceJet) -> AmbientVec:
    """Oriented unit normal of a chart jet in the product metric.

    Solved in an orthonormal frame of the ambient tangent space (two
    horizontal directions plus the vertical one), so unit length and
    orthogonality to the first derivatives are exact by construction.

    Orientation: the vertical component is made positive where the normal is
    far from horizontal (|nu| > 0.1); otherwise the horizontal part aligns
    with the conormal of the u-direction (footprint x u-direction under the
    Minkowski cross product).  On cylinder charts the second rule picks the
    Frenet normal of the generating curve, so the nonzero principal
    curvature equals the curve's signed geodesic curvature.
    """
    p = jet.X.h.tup
    b1 = _normalize_spacelike(_project_tangent(p, (0.0, 1.0, 0.0)))
    b2 = _mcross(p, b1)
    xu = (_mdot(jet.Xu.htup, b1), _mdot(jet.Xu.htup, b2), jet.Xu.t)
    xv = (_mdot(jet.Xv.htup, b1), _mdot(jet.Xv.htup, b2), jet.Xv.t)
    nc = (xu[1] * xv[2] - xu[2] * xv[1],
          xu[2] * xv[0] - xu[0] * xv[2],
          xu[0] * xv[1] - xu[1] * xv[0])
    nn = math.sqrt(nc[0] ** 2 + nc[1] ** 2 + nc[2] ** 2)
    if nn < 1e-12:
        raise NotImmersed("first derivatives are parallel")
    nc = (nc[0] / nn, nc[1] / nn, nc[2] / nn)
    if abs(nc[2]) > 0.1:
        sign = 1.0 if nc[2] > 0.0 else -1.0
    else:
        hu = jet.Xu.htup
        if _mdot(hu, hu) < _mdot(jet.Xv.htup, jet.Xv.htup):
            hu = jet.Xv.htup
        conormal = _mcross(p, _normalize_spacelike(hu))
        nh = _mcomb(nc[0], b1, nc[1], b2)
        sign = 1.0 if _mdot(nh, conormal) >= 0.0 else -1.0
    nc = (sign * nc[0], sign * nc[1], sign * nc[2])
    return AmbientVec(SpacetimeVec.of(_mcomb(nc[0], b1, nc[1], b2)), nc[2])


# -- cylinders -----------------------------------------------------------------

def make_cylinder(alpha: H2Curve, v_range: tuple[float, float] = (-DEFAULT_CYLINDER_HEIGHT, DEFAULT_CYLINDER_HEIGHT),
                  label: str = "cylinder") -> Surface:
    """Vertical surface over a unit-speed generating curve.

    The chart is X(u, v) = (alpha(u), v) with u the curve arclength, so the
    vertical field is a chart direction by construction and Xuv = Xvv = 0
    exactly.
    """
    tt = -alpha.tangents[:, 0] ** 2 + alpha.tangents[:, 1] ** 2 + alpha.tangents[:, 2] ** 2
    if np.max(np.abs(tt - 1.0)) > 1e-8:
        raise NonUnitCurve("generating curve must be unit speed")
    curve = alpha
    if curve.kg is None:
        s_mid, kg_mid = curvature_profile(curve)
        kg_all = np.interp(curve.s, s_mid, kg_mid)
        curve = H2Curve(curve.s, curve.points, curve.tangents, curve.interpolation,
                        curve.normals, kg_all, curve.kg_fn)

    def chart(u: float, v: float) -> SurfaceJet:
        a, t, n, kg = curve.frame_at(u)
        if not math.isfinite(kg):
            raise NumericalError(f"no curvature data at u = {u}")
        acc = (kg * n[0] + a[0], kg * n[1] + a[1], kg * n[2] + a[2])
        zero = (0.0, 0.0, 0.0)
        return SurfaceJet(
            X=ProdPoint(H2Point.of(a), v),
            Xu=_ambient(t, 0.0),
            Xv=_ambient(zero, 1.0),
            Xuu=_ambient(acc, 0.0),
            Xuv=_ambient(zero, 0.0),
            Xvv=_ambient(zero, 0.0),
        )

    dom = ChartDomain((curve.s_min, curve.s_max), v_range)
    return Surface(chart, dom, "analytic", label)


# -- horizontal slices -----------------------------------------------------------

def make_slice(t0: float, radius: float, label: str = "slice") -> Surface:
    """Horizontal slice in geodesic polar coordinates around the origin."""
    if radius <= 0.0:
        raise ConfigError("slice radius must be positive")

    def chart(r: float, th: float) -> SurfaceJet:
        ch, sh = math.cosh(r), math.sinh(r)
        c, s = math.cos(th), math.sin(th)
        sigma = (ch, sh * c, sh * s)
        return SurfaceJet(
            X=ProdPoint(H2Point.of(sigma), t0),
            Xu=_ambient((sh, ch * c, ch * s), 0.0),
            Xv=_ambient((0.0, -sh * s, sh * c), 0.0),
            Xuu=_ambient(sigma, 0.0),
            Xuv=_ambient((0.0, -ch * s, ch * c), 0.0),
            Xvv=_ambient((0.0, -sh * c, -sh * s), 0.0),
        )

    dom = ChartDomain((SLICE_INNER_RADIUS, radius), (0.0, 2.0 * math.pi))
    return Surface(chart, dom, "analytic", label)


# -- graphs over a Fermi chart ----------------------------------------------------

@dataclass(frozen=True, slots=True)
class HeightFunction:
    """Height field on a chart with analytic derivatives through order two."""

    f: Callable[[float, float], float]
    fu: Callable[[float, float], float]
    fv: Callable[[float, float], float]
    fuu: Callable[[float, float], float]
    fuv: Callable[[float, float], float]
    fvv: Callable[[float, float], float]


def zero_height() -> HeightFunction:
    z = lambda u, v: 0.0
    return HeightFunction(z, z, z, z, z, z)


def linear_height(a: float) -> HeightFunction:
    return HeightFunction(
        f=lambda u, v: a * u,
        fu=lambda u, v: a,
        fv=lambda u, v: 0.0,
        fuu=lambda u, v: 0.0,
        fuv=lambda u, v: 0.0,
        fvv=lambda u, v: 0.0,
    )


def bilinear_height(coef: float) -> HeightFunction:
    return HeightFunction(
        f=lambda u, v: coef * u * v,
        fu=lambda u, v: coef * v,
        fv=lambda u, v: coef * u,
        fuu=lambda u, v: 0.0,
        fuv=lambda u, v: coef,
        fvv=lambda u, v: 0.0,
    )


def gaussian_bump(center: tuple[float, float], width: float) -> HeightFunction:
    """Smooth localized bump exp(-((u-cu)^2 + (v-cv)^2) / width^2)."""
    cu, cv = center
    w2 = width * width

    def val(u, v):
        return math.exp(-((u - cu) ** 2 + (v - cv) ** 2) / w2)

    return HeightFunction(
        f=val,
        fu=lambda u, v: val(u, v) * (-2.0 * (u - cu) / w2),
        fv=lambda u, v: val(u, v) * (-2.0 * (v - cv) / w2),
        fuu=lambda u, v: val(u, v) * (4.0 * (u - cu) ** 2 / (w2 * w2) - 2.0 / w2),
        fuv=lambda u, v: val(u, v) * (4.0 * (u - cu) * (v - cv) / (w2 * w2)),
        fvv=lambda u, v: val(u, v) * (4.0 * (v - cv) ** 2 / (w2 * w2) - 2.0 / w2),
    )


def make_graph(height: HeightFunction,
               domain: ChartDomain = ChartDomain((-1.0, 1.0), (-1.0, 1.0)),
               label: str = "graph") -> Surface:
    """Height graph over the Fermi chart along the geodesic through the origin.

    The chart of the hyperbolic plane is sigma(u, v) = point at signed
    distance v from the axis point at arclength u; its metric is
    cosh^2(v) du^2 + dv^2.
    """

    def chart(u: float, v: float) -> SurfaceJet:
        chu, shu = math.cosh(u), math.sinh(u)
        chv, shv = math.cosh(v), math.sinh(v)
        sigma = (chu * chv, shu * chv, shv)
        sig_u = (shu * chv, chu * chv, 0.0)
        sig_v = (chu * shv, shu * shv, chv)
        sig_uu = (chu * chv, shu * chv, 0.0)
        sig_uv = (shu * shv, chu * shv, 0.0)
        return SurfaceJet(
            X=ProdPoint(H2Point.of(sigma), height.f(u, v)),
            Xu=_ambient(sig_u, height.fu(u, v)),
            Xv=_ambient(sig_v, height.fv(u, v)),
            Xuu=_ambient(sig_uu, height.fuu(u, v)),
            Xuv=_ambient(sig_uv, height.fuv(u, v)),
            Xvv=_ambient(sigma, height.fvv(u, v)),
        )

    return Surface(chart, domain, "analytic", label)


# -- finite-difference jets ----------------------------------------------------------

def _fd_chart(pos, domain: ChartDomain, step: float):
    """Jet evaluator from a position-only chart, by central differences.

    First-derivative horizontal parts are re-projected onto the hyperboloid
    tangent space; second derivatives are the raw coordinate differences.
    The stencil shrinks near the chart boundary.
    """
    (u0, u1) = domain.u_range
    (v0, v1) = domain.v_range

    def chart(u: float, v: float) -> SurfaceJet:
        h = min(step, 0.5 * (u - u0), 0.5 * (u1 - u), 0.5 * (v - v0), 0.5 * (v1 - v))
        if h <= 0.0:
            raise OutOfDomain("finite-difference stencil does not fit at the boundary")
        pc, tc = pos(u, v)
        pu_p, tu_p = pos(u + h, v)
        pu_m, tu_m = pos(u - h, v)
        pv_p, tv_p = pos(u, v + h)
        pv_m, tv_m = pos(u, v - h)
        ppp, tpp = pos(u + h, v + h)
        ppm, tpm = pos(u + h, v - h)
        pmp, tmp_ = pos(u - h, v + h)
        pmm, tmm = pos(u - h, v - h)

        def d1(pp, pm):
            return tuple((a - b) / (2.0 * h) for a, b in zip(pp, pm))

        def d2(pp, pm):
            return tuple((a - 2.0 * b + c) / (h * h) for a, b, c in zip(pp, pc, pm))

        xu = _project_tangent(pc, d1(pu_p, pu_m))
        xv = _project_tangent(pc, d1(pv_p, pv_m))
        xuu = d2(pu_p, pu_m)
        xvv = d2(pv_p, pv_m)
        xuv = tuple((a - b - c + d) / (4.0 * h * h)
                    for a, b, c, d in zip(ppp, ppm, pmp, pmm))
        return SurfaceJet(
            X=ProdPoint(H2Point.of(pc), tc),
            Xu=_ambient(xu, (tu_p - tu_m) / (2.0 * h)),
            Xv=_ambient(xv, (tv_p - tv_m) / (2.0 * h)),
            Xuu=_ambient(xuu, (tu_p - 2.0 * tc + tu_m) / (h * h)),
            Xuv=_ambient(xuv, (tpp - tpm - tmp_ + tmm) / (4.0 * h * h)),
            Xvv=_ambient(xvv, (tv_p - 2.0 * tc + tv_m) / (h * h)),
        )

    return chart


def finite_difference_surface(base: Surface, step: float = FD_STEP,
                              label: str | None = None) -> Surface:
    """Rebuild a surface with jets from central differences of positions only."""
    if step <= 0.0:
        raise ConfigError("finite-difference step must be positive")

    def pos(u: float, v: float) -> tuple[Triple, float]:
        p = base.chart(u, v).X
        return p.h.tup, p.t

    return Surface(_fd_chart(pos, base.domain, step), base.domain,
                   "finite-difference", label or f"{base.label}(fd)", step)


# -- perturbation ------------------------------------------------------------------

def perturb(base: Surface, eps: float, bump: HeightFunction | None = None,
            label: str | None = None, fd_step: float = FD_STEP) -> Surface:
    """Displace the chart by eps * bump along the unit normal.

    Pure height bumps are invisible on vertical charts (they only slide
    points along the rulings), so the perturbation moves each point off the
    surface along its normal; on slices and graphs, where the normal is
    nearly vertical, this is essentially a height bump.  Jets of the
    displaced chart come from central differences of its positions.

    eps = 0 returns the base surface object unchanged.  The default bump is
    a Gaussian centered on the chart domain with width a quarter of the
    smaller extent.
    """
    if eps < 0.0:
        raise ConfigError("perturbation size must be nonnegative")
    if eps == 0.0:
        return base
    if bump is None:
        wu, wv = base.domain.widths
        bump = gaussian_bump(base.domain.center, 0.25 * min(wu, wv))

    def pos(u: float, v: float) -> tuple[Triple, float]:
        jet = base.chart(u, v)
        n = unit_normal(jet)
        d = eps * bump.f(u, v)
        p = jet.X.h.tup
        a_h = math.sqrt(max(0.0, _mdot(n.htup, n.htup)))
        if a_h < 1e-15:
            return p, jet.X.t + d * n.t
        direction = _mscale(1.0 / a_h, n.htup)
        return _exp_raw(p, direction, d * a_h), jet.X.t + d * n.t

    return Surface(_fd_chart(pos, base.domain, fd_step), base.domain,
                   "finite-difference",
                   label or f"{base.label}+bump({eps})", fd_step)


def rescale_chart(base: Surface, a: float, b: float) -> Surface:
    """Reparametrize the chart by (u, v) = (a * u', b * v')."""
    if a == 0.0 or b == 0.0:
        raise ConfigError("scale factors must be nonzero")

    def chart(u: float, v: float) -> SurfaceJet:
        j = base.chart(a * u, b * v)

        def scale(w: AmbientVec, c: float) -> AmbientVec:
            return _ambient(tuple(c * x for x in w.htup), c * w.t)

        return SurfaceJet(
            X=j.X,
            Xu=scale(j.Xu, a), Xv=scale(j.Xv, b),
            Xuu=scale(j.Xuu, a * a), Xuv=scale(j.Xuv, a * b), Xvv=scale(j.Xvv, b * b),
        )

    (u0, u1) = sorted((base.domain.u_range[0] / a, base.domain.u_range[1] / a))
    (v0, v1) = sorted((base.domain.v_range[0] / b, base.domain.v_range[1] / b))
    dom = ChartDomain((u0, u1), (v0, v1))
    return Surface(chart, dom, base.derivative_mode,
                   f"{base.label}(x{a},x{b})", base.fd_step)


# -- JSON configuration ---------------------------------------------------------------

def _curve_from_config(cfg: dict, u_range: tuple[float, float], step: float) -> H2Curve:
    kind = cfg.get("kind")
    if kind == "constant":
        k = cfg.get("value")
        if not isinstance(k, (int, float)) or not math.isfinite(k):
            raise ConfigError("constant curve needs a finite 'value'")
        return curve_from_curvature(constant_curvature(float(k)), u_range, step)
    if kind == "linear":
        slope = cfg.get("slope")
        intercept = cfg.get("intercept", 0.0)
        if not isinstance(slope, (int, float)) or not math.isfinite(slope):
            raise ConfigError("linear curve needs a finite 'slope'")
        return curve_from_curvature(linear_curvature(float(slope), float(intercept)),
                                    u_range, step)
    if kind == "spline":
        ks = cfg.get("knots_s")
        kk = cfg.get("knots_k")
        if not isinstance(ks, list) or not isinstance(kk, list) or len(ks) != len(kk):
            raise ConfigError("spline curve needs matching 'knots_s' and 'knots_k'")
        try:
            fn = spline_curvature([float(x) for x in ks], [float(y) for y in kk])
        except NumericalError as exc:
            raise ConfigError(str(exc)) from exc
        return curve_from_curvature(fn, u_range, step)
    raise ConfigError(f"unknown curve kind {kind!r}")


def _range_from_config(cfg, default: tuple[float, float], name: str) -> tuple[float, float]:
    if cfg is None:
        return default
    if (not isinstance(cfg, (list, tuple)) or len(cfg) != 2
            or not all(isinstance(x, (int, float)) and math.isfinite(x) for x in cfg)
            or cfg[1] <= cfg[0]):
        raise ConfigError(f"bad {name} range {cfg!r}")
    return float(cfg[0]), float(cfg[1])


def _cylinder_curve_from_config(cfg: dict) -> H2Curve:
    curve_cfg = cfg.get("curve")
    if not isinstance(curve_cfg, dict):
        raise ConfigError("cylinder needs a 'curve' object")
    domain = cfg.get("domain") or {}
    u_range = _range_from_config(domain.get("u"), (-1.5, 1.5), "u")
    step = cfg.get("curve_step", DEFAULT_CURVE_STEP)
    if not isinstance(step, (int, float)) or not 0.0 < step <= 0.1:
        raise ConfigError(f"bad curve_step {step!r}")
    return _curve_from_config(curve_cfg, u_range, float(step))


def generating_curve_of_config(cfg: dict) -> H2Curve | None:
    """The generating curve a cylinder config describes (None for other kinds)."""
    if isinstance(cfg, dict) and cfg.get("kind") == "cylinder":
        return _cylinder_curve_from_config(cfg)
    return None


def from_config(cfg: dict) -> Surface:
    """Build a preset surface from its JSON description.

    See the CLI module docstring for the exact schema.
    """
    if not isinstance(cfg, dict):
        raise ConfigError("surface config must be an object")
    kind = cfg.get("kind")
    domain = cfg.get("domain") or {}
    if not isinstance(domain, dict):
        raise ConfigError("'domain' must be an object")
    if kind == "cylinder":
        v_range = _range_from_config(domain.get("v"),
                                     (-DEFAULT_CYLINDER_HEIGHT, DEFAULT_CYLINDER_HEIGHT), "v")
        alpha = _cylinder_curve_from_config(cfg)
        return make_cylinder(alpha, v_range, label=cfg.get("label", "cylinder"))
    if kind == "slice":
        t0 = cfg.get("t0", 0.0)
        radius = cfg.get("radius")
        if not isinstance(t0, (int, float)) or not math.isfinite(t0):
            raise ConfigError("slice needs a finite 't0'")
        if not isinstance(radius, (int, float)) or not radius > 0.0:
            raise ConfigError("slice needs a positive 'radius'")
        return make_slice(float(t0), float(radius), label=cfg.get("label", "slice"))
    if kind == "graph":
        fcfg = cfg.get("f")
        if not isinstance(fcfg, dict):
            raise ConfigError("graph needs an 'f' object")
        fkind = fcfg.get("kind")
        if fkind == "bilinear":
            coef = fcfg.get("coef")
            if not isinstance(coef, (int, float)) or not math.isfinite(coef):
                raise ConfigError("bilinear height needs a finite 'coef'")
            height = bilinear_height(float(coef))
        elif fkind == "linear":
            a = fcfg.get("a")
            if not isinstance(a, (int, float)) or not math.isfinite(a):
                raise ConfigError("linear height needs a finite 'a'")
            height = linear_height(float(a))
        elif fkind == "zero":
            height = zero_height()
        else:
            raise ConfigError(f"unknown height kind {fkind!r}")
        u_range = _range_from_config(domain.get("u"), (-1.0, 1.0), "u")
        v_range = _range_from_config(domain.get("v"), (-1.0, 1.0), "v")
        return make_graph(height, ChartDomain(u_range, v_range),
                          label=cfg.get("label", "graph"))
    if kind == "perturbed":
        base_cfg = cfg.get("base")
        eps = cfg.get("eps")
        if not isinstance(base_cfg, dict):
            raise ConfigError("perturbed surface needs a 'base' object")
        if not isinstance(eps, (int, float)) or not math.isfinite(eps) or eps < 0.0:
            raise ConfigError("perturbed surface needs eps >= 0")
        base = from_config(base_cfg)
        bump_cfg = cfg.get("bump")
        bump = None
        if bump_cfg is not None:
            if not isinstance(bump_cfg, dict):
                raise ConfigError("'bump' must be an object")
            center = bump_cfg.get("center", list(base.domain.center))
            width = bump_cfg.get("width", 0.25 * min(base.domain.widths))
            if (not isinstance(center, (list, tuple)) or len(center) != 2
                    or not all(isinstance(x, (int, float)) and math.isfinite(x) for x in center)):
                raise ConfigError("bump center must be [u, v]")
            if not isinstance(width, (int, float)) or not width > 0.0:
                raise ConfigError("bump width must be positive")
            bump = gaussian_bump((float(center[0]), float(center[1])), float(width))
        return perturb(base, float(eps), bump,
                       label=cfg.get("label", f"perturbed({base.label})"))
    raise ConfigError(f"unknown surface kind {kind!r}")


# -- preset corpus ---------------------------------------------------------------------

COTH1 = math.cosh(1.0) / math.sinh(1.0)

CORPUS_CONFIGS: dict[str, dict] = {
    "cylinder_geodesic": {"kind": "cylinder", "label": "cylinder_geodesic",
                          "curve": {"kind": "constant", "value": 0.0},
                          "domain": {"u": [-1.5, 1.5]}},
    "cylinder_circle": {"kind": "cylinder", "label": "cylinder_circle",
                        "curve": {"kind": "constant", "value": COTH1},
                        "domain": {"u": [0.0, 2.0 * math.pi * math.sinh(1.0)]}},
    "cylinder_horocycle": {"kind": "cylinder", "label": "cylinder_horocycle",
                           "curve": {"kind": "constant", "value": 1.0},
                           "domain": {"u": [0.0, 3.0]}},
    "cylinder_spline": {"kind": "cylinder", "label": "cylinder_spline",
                        "curve": {"kind": "spline",
                                  "knots_s": [0.0, 0.75, 1.5, 2.25, 3.0],
                                  "knots_k": [0.4, 1.1, -0.7, 0.9, 0.2]},
                        "domain": {"u": [0.0, 3.0]}},
    "cylinder_inflection": {"kind": "cylinder", "label": "cylinder_inflection",
                            "curve": {"kind": "linear", "slope": 1.0},
                            "domain": {"u": [-1.5, 1.5]}},
    "slice": {"kind": "slice", "label": "slice", "t0": 0.0, "radius": 2.0},
    "perturbed_cylinder": {"kind": "perturbed", "label": "perturbed_cylinder",
                           "eps": 1e-2,
                           "base": {"kind": "cylinder",
                                    "curve": {"kind": "constant", "value": COTH1},
                                    "domain": {"u": [0.0, 2.0 * math.pi * math.sinh(1.0)]}}},
    "perturbed_slice": {"kind": "perturbed", "label": "perturbed_slice",
                        "eps": 1e-2,
                        "base": {"kind": "slice", "t0": 0.0, "radius": 2.0}},
}

CYLINDER_PRESETS = ("cylinder_geodesic", "cylinder_circle", "cylinder_horocycle",
                    "cylinder_spline", "cylinder_inflection")

NON_CYLINDER_PRESETS = ("slice", "perturbed_cylinder", "perturbed_slice")


@lru_cache(maxsize=None)
def preset(name: str) -> Surface:
    """Corpus surface by name (cached; surfaces are immutable)."""
    if name not in CORPUS_CONFIGS:
        raise ConfigError(f"unknown preset {name!r}")
    return from_config(CORPUS_CONFIGS[name])
