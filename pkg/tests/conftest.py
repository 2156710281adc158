"""Shared fixtures: preset surfaces, curves and the verification report.

Everything heavy is session-scoped; surfaces are immutable and safe to
share.
"""

import math

import pytest
from hypothesis import strategies as st

from h2xr.hyperbolic import H2Point, H2Tangent, curve_from_curvature
from h2xr.minkowski import SpacetimeVec, _normalize_spacelike, _project_tangent
from h2xr.surfaces import preset

COTH1 = math.cosh(1.0) / math.sinh(1.0)


@pytest.fixture(scope="session")
def circle_cylinder():
    return preset("cylinder_circle")


@pytest.fixture(scope="session")
def geodesic_cylinder():
    return preset("cylinder_geodesic")


@pytest.fixture(scope="session")
def inflection_cylinder():
    return preset("cylinder_inflection")


@pytest.fixture(scope="session")
def spline_cylinder():
    return preset("cylinder_spline")


@pytest.fixture(scope="session")
def slice_surface():
    return preset("slice")


@pytest.fixture(scope="session")
def perturbed_cylinder():
    return preset("perturbed_cylinder")


@pytest.fixture(scope="session")
def circle_curve():
    return curve_from_curvature(lambda s: COTH1,
                                (0.0, 2.0 * math.pi * math.sinh(1.0)), 1e-3)


@pytest.fixture(scope="session")
def circle_trace(circle_cylinder):
    from h2xr.flows import trace_asymptotic
    return trace_asymptotic(circle_cylinder, 1.0, 0.0, 5.0, 1e-3)


@pytest.fixture(scope="session")
def inflection_trace(inflection_cylinder):
    from h2xr.flows import trace_asymptotic
    return trace_asymptotic(inflection_cylinder, 1.0, 0.0, 5.0, 1e-3)


@pytest.fixture(scope="session")
def verification_report():
    from h2xr.verification import run_verification
    return run_verification(seed=0)


# -- hypothesis strategies ------------------------------------------------------

def h2_points(max_coord: float = 3.0):
    """Points on the upper sheet with bounded spatial coordinates."""

    def build(x1: float, x2: float) -> H2Point:
        return H2Point.of((math.sqrt(1.0 + x1 * x1 + x2 * x2), x1, x2))

    finite = st.floats(-max_coord, max_coord, allow_nan=False)
    return st.builds(build, finite, finite)


def h2_unit_tangents(max_coord: float = 3.0):
    """(point, unit tangent) pairs; the raw direction is projected."""

    def build(p: H2Point, w1: float, w2: float) -> H2Tangent:
        raw = (0.0, w1, w2)
        proj = _project_tangent(p.tup, raw)
        unit = _normalize_spacelike(proj)
        return H2Tangent(p, SpacetimeVec.of(unit))

    nonzero = st.floats(-2.0, 2.0, allow_nan=False).filter(lambda x: abs(x) > 1e-3)
    return st.builds(build, h2_points(max_coord), nonzero, nonzero)
