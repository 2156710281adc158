"""Minkowski linear algebra in R^{2,1}.

The bilinear form has signature (-, +, +):

    <a, b> = -a0*b0 + a1*b1 + a2*b2

Points of the hyperbolic plane live on the upper sheet of <x, x> = -1.
Public code passes :class:`SpacetimeVec`; the ``_m*`` helpers operate on raw
float triples and are what the integrators and chart evaluators use in their
inner loops.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NumericalError

Triple = tuple[float, float, float]


@dataclass(frozen=True, slots=True)
class SpacetimeVec:
    """Coordinate vector in R^{2,1} (model coordinates, dimensionless)."""

    x0: float
    x1: float
    x2: float

    def __post_init__(self):
        if not (math.isfinite(self.x0) and math.isfinite(self.x1) and math.isfinite(self.x2)):
            raise NumericalError(f"non-finite coordinates {(self.x0, self.x1, self.x2)}")

    @property
    def tup(self) -> Triple:
        return (self.x0, self.x1, self.x2)

    @classmethod
    def of(cls, t: Triple) -> "SpacetimeVec":
        return cls(t[0], t[1], t[2])


def minkowski_inner(a: SpacetimeVec, b: SpacetimeVec) -> float:
    """Minkowski inner product -a0*b0 + a1*b1 + a2*b2."""
    return -a.x0 * b.x0 + a.x1 * b.x1 + a.x2 * b.x2


# -- raw-triple helpers ------------------------------------------------------

def _mdot(a: Triple, b: Triple) -> float:
    return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _madd(a: Triple, b: Triple) -> Triple:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def _msub(a: Triple, b: Triple) -> Triple:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _mscale(c: float, a: Triple) -> Triple:
    return (c * a[0], c * a[1], c * a[2])


def _mcomb(c1: float, a: Triple, c2: float, b: Triple) -> Triple:
    return (c1 * a[0] + c2 * b[0], c1 * a[1] + c2 * b[1], c1 * a[2] + c2 * b[2])


def _mcross(a: Triple, b: Triple) -> Triple:
    """Minkowski cross product: <a x b, c> equals det(a, b, c).

    The Euclidean cross product composed with the metric flip on the first
    coordinate.  For p on the hyperboloid and T a unit tangent at p,
    ``_mcross(p, T)`` is the unit tangent at p orthogonal to T, and (T, p x T)
    is the orientation every signed quantity in this package refers to.
    """
    cx = a[1] * b[2] - a[2] * b[1]
    cy = a[2] * b[0] - a[0] * b[2]
    cz = a[0] * b[1] - a[1] * b[0]
    return (-cx, cy, cz)


def _project_tangent(p: Triple, w: Triple) -> Triple:
    """Tangential projection w + <w, p> p at a hyperboloid point p."""
    c = _mdot(w, p)
    return (w[0] + c * p[0], w[1] + c * p[1], w[2] + c * p[2])


def _normalize_point(v: Triple) -> Triple:
    """Rescale onto the upper sheet <v, v> = -1."""
    q = -_mdot(v, v)
    if q <= 0.0:
        raise NumericalError(f"cannot normalize non-timelike vector {v} to the hyperboloid")
    c = 1.0 / math.sqrt(q)
    if v[0] < 0.0:
        c = -c
    return (c * v[0], c * v[1], c * v[2])


def _normalize_spacelike(v: Triple) -> Triple:
    q = _mdot(v, v)
    if q <= 0.0:
        raise NumericalError(f"cannot normalize non-spacelike vector {v}")
    c = 1.0 / math.sqrt(q)
    return (c * v[0], c * v[1], c * v[2])
