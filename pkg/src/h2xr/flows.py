"""Asymptotic lines through parabolic points, with their diagnostics.

A parabolic point has exactly one vanishing principal curvature; the
corresponding principal direction is the asymptotic direction and the
integral curve of that direction field is the unique asymptotic line.  The
tracer integrates the field in chart coordinates (so the curve stays on the
surface by construction) with a fourth-order Runge-Kutta step and
sign-continuity of the eigenvector choice.

Per-sample diagnostics recorded along the trace:

* ``k2``, ``H`` - the nonzero principal curvature and the mean curvature;
* ``lam`` - the connection coefficient <D_{e2} e2, e1>, measured by a short
  transverse finite difference of the e2 field;
* ``e2``, ``e3`` - the transverse principal direction and the unit normal as
  ambient vectors.

On doubly flat surfaces the trace must be an ambient geodesic, 1/H must be
affine in arclength, lam' = lam^2 and k2' = lam k2 must hold, and e2, e3
must be covariantly constant; the checkers below measure all of that from
the samples alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curvature import (PARABOLIC, ShapeData, classify_point, forms_from_jet,
                        principal_curvatures)
from .errors import (DegenerateDirection, InsufficientSamples, NotParabolic,
                     NumericalError, OutOfDomain, PlanarSample)
from .hyperbolic import H2Point, H2Tangent
from .minkowski import SpacetimeVec, _mdot, _project_tangent
from .numerics import affine_fit
from .product import ProdGeodesic, ProdPoint, ProdTangent, prod_dist
from .surfaces import Surface

DOMAIN_EDGE = "DOMAIN_EDGE"
MAX_LENGTH = "MAX_LENGTH"
PLANAR_HIT = "PLANAR_HIT"
STEP_FAILURE = "STEP_FAILURE"

TRACE_CSV_HEADER = "s,u,v,h_x0,h_x1,h_x2,t,k2,H,lambda"


@dataclass(frozen=True)
class TraceRecord:
    """Arclength-sampled asymptotic line (or control path) with diagnostics."""

    s: np.ndarray
    uv: np.ndarray
    h: np.ndarray
    t: np.ndarray
    k2: np.ndarray
    H: np.ndarray
    lam: np.ndarray
    e2: np.ndarray
    e3: np.ndarray
    stop_reason: str
    step: float
    tol: float

    def __post_init__(self):
        d = np.diff(self.s)
        if len(self.s) < 2 or np.any(d <= 0.0):
            raise NumericalError("trace samples must be strictly increasing in s")
        if (d.max() - d.min()) > 0.01 * d.mean():
            raise NumericalError("trace samples must be uniformly spaced within 1%")
        parab = np.abs(self.k2) >= self.tol
        gap = np.abs(2.0 * self.H[parab] - self.k2[parab])
        if gap.size and gap.max() >= 1e-10:
            raise NumericalError("2H must equal k2 at parabolic samples")

    def __len__(self) -> int:
        return len(self.s)

    def point(self, i: int) -> ProdPoint:
        return ProdPoint(H2Point.of(tuple(self.h[i])), float(self.t[i]))

    def to_csv(self) -> str:
        lines = [TRACE_CSV_HEADER]
        for i in range(len(self.s)):
            lines.append(",".join([
                repr(float(self.s[i])), repr(float(self.uv[i, 0])),
                repr(float(self.uv[i, 1])), repr(float(self.h[i, 0])),
                repr(float(self.h[i, 1])), repr(float(self.h[i, 2])),
                repr(float(self.t[i])), repr(float(self.k2[i])),
                repr(float(self.H[i])), repr(float(self.lam[i])),
            ]))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True, slots=True)
class AffineFit:
    """Least-squares line a*s + b with its root-mean-square residual."""

    a: float
    b: float
    rms_residual: float
    n: int

    def __post_init__(self):
        if self.n < 3:
            raise InsufficientSamples("affine fit needs at least three samples")
        if self.rms_residual < 0.0:
            raise NumericalError("rms residual cannot be negative")


@dataclass(frozen=True, slots=True)
class GeodesicDeviation:
    max_dev: float
    at_s: float

    def __post_init__(self):
        if self.max_dev < 0.0:
            raise NumericalError("deviation cannot be negative")


# -- tracing ----------------------------------------------------------------------

def _principal_at(S: Surface, u: float, v: float):
    jet = S.jet(u, v)
    forms = forms_from_jet(jet)
    k1, k2, d1, d2 = principal_curvatures(forms)
    return jet, forms, k1, k2, d1, d2


def _aligned(d: tuple[float, float], ref: tuple[float, float]) -> tuple[float, float]:
    if d[0] * ref[0] + d[1] * ref[1] < 0.0:
        return (-d[0], -d[1])
    return d


def _ambient_dir(jet, d) -> np.ndarray:
    hu, hv = jet.Xu.htup, jet.Xv.htup
    return np.array([
        d[0] * hu[0] + d[1] * hv[0],
        d[0] * hu[1] + d[1] * hv[1],
        d[0] * hu[2] + d[1] * hv[2],
        d[0] * jet.Xu.t + d[1] * jet.Xv.t,
    ])


def _prod_inner4(a: np.ndarray, b: np.ndarray) -> float:
    return float(-a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3])


def _lambda_at(eval_at, domain, u: float, v: float, d2_chart, e2_amb, e1_amb,
               footprint, delta: float = 1e-5) -> float:
    """Transverse connection coefficient <D_{e2} e2, e1> at a chart point."""
    (u0, u1) = domain.u_range
    (v0, v1) = domain.v_range
    room = min(u - u0, u1 - u, v - v0, v1 - v)
    hstep = min(delta, 0.25 * room / (1e-12 + max(abs(d2_chart[0]), abs(d2_chart[1]))))
    if hstep <= 1e-9:
        return math.nan

    def e2_field(uu: float, vv: float) -> np.ndarray:
        jet, _, _, _, _, d2o = eval_at(uu, vv)
        w = _ambient_dir(jet, d2o)
        if _prod_inner4(w, e2_amb) < 0.0:
            w = -w
        return w

    wp = e2_field(u + hstep * d2_chart[0], v + hstep * d2_chart[1])
    wm = e2_field(u - hstep * d2_chart[0], v - hstep * d2_chart[1])
    der = (wp - wm) / (2.0 * hstep)
    cov_h = _project_tangent(footprint, (der[0], der[1], der[2]))
    cov = np.array([cov_h[0], cov_h[1], cov_h[2], der[3]])
    return _prod_inner4(cov, e1_amb)


def trace_asymptotic(S: Surface, u0: float, v0: float, length: float,
                     step: float, tol: float = 1e-7,
                     with_connection: bool = True) -> TraceRecord:
    """Trace the asymptotic line through a parabolic point, both ways.

    The trace runs length/2 in each direction from the seed and stops early
    at the domain edge, at a planar point (|k2| < tol), or on numerical
    breakdown of the direction field.  ``with_connection=False`` skips the
    transverse measurement of the connection coefficient (NaN in the record),
    which roughly halves the cost when only the path is needed.
    """
    if step <= 0.0 or length <= 0.0:
        raise NumericalError("length and step must be positive")

    cache: dict[tuple[float, float], tuple] = {}

    def eval_at(u: float, v: float):
        key = (u, v)
        hit = cache.get(key)
        if hit is None:
            hit = _principal_at(S, u, v)
            if len(cache) < 65536:
                cache[key] = hit
        return hit

    jet0, forms0, k1_0, k2_0, d1_0, d2_0 = eval_at(u0, v0)
    cls = classify_point(
        ShapeData(k1_0, k2_0, d1_0, d2_0, 0.5 * (k1_0 + k2_0), k1_0 * k2_0,
                  k1_0 * k2_0 - forms0.nu ** 2, math.nan), tol)
    if cls.tag != PARABOLIC:
        raise NotParabolic(f"seed ({u0}, {v0}) classifies {cls.tag}")
    if abs(k2_0) - abs(k1_0) < 10.0 * tol:
        raise DegenerateDirection("principal curvatures too close to separate directions")

    half_steps = int(round(0.5 * length / step))

    def field(u: float, v: float, ref):
        _, _, _, _, d1, _ = eval_at(u, v)
        return _aligned(d1, ref)

    def leg(direction) -> tuple[list, str]:
        """Samples after the seed, walking the field aligned to ``direction``."""
        samples = []
        u, v = u0, v0
        ref = direction
        for _ in range(half_steps):
            try:
                k1v = field(u, v, ref)
                k2v = field(u + 0.5 * step * k1v[0], v + 0.5 * step * k1v[1], k1v)
                k3v = field(u + 0.5 * step * k2v[0], v + 0.5 * step * k2v[1], k1v)
                k4v = field(u + step * k3v[0], v + step * k3v[1], k1v)
            except OutOfDomain:
                return samples, DOMAIN_EDGE
            except NumericalError:
                return samples, STEP_FAILURE
            un = u + step * (k1v[0] + 2.0 * k2v[0] + 2.0 * k3v[0] + k4v[0]) / 6.0
            vn = v + step * (k1v[1] + 2.0 * k2v[1] + 2.0 * k3v[1] + k4v[1]) / 6.0
            if not S.domain.contains(un, vn):
                return samples, DOMAIN_EDGE
            try:
                jet, forms, k1n, k2n, d1n, d2n = eval_at(un, vn)
            except NumericalError:
                return samples, STEP_FAILURE
            if abs(k2n) < tol:
                return samples, PLANAR_HIT
            if abs(k2n) - abs(k1n) < 10.0 * tol:
                return samples, STEP_FAILURE
            d1n = _aligned(d1n, k1v)
            samples.append((un, vn, jet, forms, k1n, k2n, d1n, d2n))
            u, v, ref = un, vn, d1n
        return samples, MAX_LENGTH

    fwd, reason_f = leg(d1_0)
    bwd, reason_b = leg((-d1_0[0], -d1_0[1]))

    priority = {PLANAR_HIT: 3, STEP_FAILURE: 2, DOMAIN_EDGE: 1, MAX_LENGTH: 0}
    stop = reason_f if priority[reason_f] >= priority[reason_b] else reason_b

    n_b, n_f = len(bwd), len(fwd)
    n = n_b + 1 + n_f
    s = np.empty(n)
    uv = np.empty((n, 2))
    hpts = np.empty((n, 3))
    ts = np.empty(n)
    k2s = np.empty(n)
    hs = np.empty(n)
    lams = np.empty(n)
    e2s = np.empty((n, 4))
    e3s = np.empty((n, 4))

    seed_entry = (u0, v0, jet0, forms0, k1_0, k2_0, d1_0, d2_0)
    ordered = [*reversed(bwd), seed_entry, *fwd]
    for i, (u, v, jet, forms, k1v, k2v, d1v, d2v) in enumerate(ordered):
        s[i] = (i - n_b) * step
        uv[i] = (u, v)
        hpts[i] = jet.X.h.tup
        ts[i] = jet.X.t
        k2s[i] = k2v
        hs[i] = 0.5 * (k1v + k2v)
        d1_amb = _ambient_dir(jet, d1v)
        if i < n_b:
            # the backward leg walked against d1; flip so e1 always points
            # along increasing s
            d1_amb = -d1_amb
        e2_amb = _ambient_dir(jet, d2v)
        nh = forms.normal.htup
        e3s[i] = (nh[0], nh[1], nh[2], forms.normal.t)
        if i > 0 and _prod_inner4(e2_amb, e2s[i - 1]) < 0.0:
            e2_amb = -e2_amb
        e2s[i] = e2_amb
        lams[i] = _lambda_at(eval_at, S.domain, u, v, d2v, e2_amb, d1_amb,
                             jet.X.h.tup) if with_connection else math.nan

    return TraceRecord(s, uv, hpts, ts, k2s, hs, lams, e2s, e3s, stop, step, tol)


# -- diagnostics -------------------------------------------------------------------

def geodesic_deviation(tr: TraceRecord) -> GeodesicDeviation:
    """Max distance from the trace to the exact geodesic it should be.

    The comparison geodesic is built from the first sample and a
    second-order one-sided estimate of the initial velocity, so it uses
    nothing but the sampled points.
    """
    if len(tr) < 3:
        raise InsufficientSamples("need at least three samples")
    h = tr.step
    vh = (-3.0 * tr.h[0] + 4.0 * tr.h[1] - tr.h[2]) / (2.0 * h)
    vt = float(-3.0 * tr.t[0] + 4.0 * tr.t[1] - tr.t[2]) / (2.0 * h)
    base = tr.point(0)
    vh = _project_tangent(base.h.tup, tuple(vh))
    norm = math.sqrt(max(0.0, _mdot(vh, vh)) + vt * vt)
    if norm < 1e-12:
        raise NumericalError("trace samples do not define a direction")
    tangent = ProdTangent(base, H2Tangent(base.h, SpacetimeVec.of(
        tuple(c / norm for c in vh))), vt / norm)
    geo = ProdGeodesic.from_tangent(tangent)
    max_dev, at_s = 0.0, float(tr.s[0])
    for i in range(len(tr)):
        d = prod_dist(geo.point(float(tr.s[i] - tr.s[0])), tr.point(i))
        if d > max_dev:
            max_dev, at_s = d, float(tr.s[i])
    return GeodesicDeviation(max_dev, at_s)


@dataclass(frozen=True, slots=True)
class FrameOdeResiduals:
    """Max residuals of the structure equations along a trace."""

    lambda_ode: float
    k2_ode: float
    de2: float
    de3: float


def frame_ode_residuals(tr: TraceRecord) -> FrameOdeResiduals:
    """Residuals of lam' = lam^2, k2' = lam k2, and covariant constancy of e2, e3."""
    n = len(tr)
    if n < 5:
        raise InsufficientSamples("need at least five samples")
    h = tr.step
    lam_p = (tr.lam[2:] - tr.lam[:-2]) / (2.0 * h)
    k2_p = (tr.k2[2:] - tr.k2[:-2]) / (2.0 * h)
    lam_c = tr.lam[1:-1]
    k2_c = tr.k2[1:-1]
    r1 = float(np.nanmax(np.abs(lam_p - lam_c ** 2)))
    r2 = float(np.nanmax(np.abs(k2_p - lam_c * k2_c)))

    def cov_norm(rows: np.ndarray) -> float:
        der = (rows[2:] - rows[:-2]) / (2.0 * h)
        worst = 0.0
        for i in range(der.shape[0]):
            ch = _project_tangent(tuple(tr.h[i + 1]), tuple(der[i, :3]))
            n2 = max(0.0, _mdot(ch, ch)) + der[i, 3] ** 2
            worst = max(worst, math.sqrt(n2))
        return worst

    return FrameOdeResiduals(r1, r2, cov_norm(tr.e2), cov_norm(tr.e3))


def fit_inverse_H(tr: TraceRecord) -> AffineFit:
    """Least-squares affine fit of 1/H against arclength."""
    if len(tr) < 3:
        raise InsufficientSamples("need at least three samples")
    if np.any(np.abs(tr.k2) < tr.tol) or np.any(~np.isfinite(tr.k2)):
        raise PlanarSample("trace contains planar samples; 1/H is not defined there")
    a, b, rms = affine_fit(tr.s, 1.0 / tr.H)
    return AffineFit(a, b, rms, len(tr))
