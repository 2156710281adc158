"""Minkowski algebra, hyperboloid geometry, and prescribed-curvature curves."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from h2xr.errors import (BadCurvatureFunction, NonUnitTangent, NumericalError,
                         OutOfDomain)
from h2xr.hyperbolic import (H2Curve, H2Point, H2Tangent, curvature_profile,
                             curve_from_curvature, h2_covariant_deriv, h2_dist,
                             h2_exp, h2_project_tangent,
                             measure_geodesic_curvature)
from h2xr.minkowski import SpacetimeVec, minkowski_inner

from conftest import COTH1, h2_points, h2_unit_tangents

ORIGIN = H2Point.of((1.0, 0.0, 0.0))
E1 = H2Tangent(ORIGIN, SpacetimeVec.of((0.0, 1.0, 0.0)))
E2 = H2Tangent(ORIGIN, SpacetimeVec.of((0.0, 0.0, 1.0)))


def vec(x0, x1, x2):
    return SpacetimeVec(x0, x1, x2)


class TestMinkowskiInner:
    def test_timelike_unit(self):
        assert minkowski_inner(vec(1, 0, 0), vec(1, 0, 0)) == -1.0

    def test_orthogonal_spacelike_axes(self):
        assert minkowski_inner(vec(0, 1, 0), vec(0, 0, 1)) == 0.0

    def test_hand_arithmetic(self):
        # -2*1 + 1*1 + 1*0
        assert minkowski_inner(vec(2, 1, 1), vec(1, 1, 0)) == -1.0

    @given(st.lists(st.floats(-10, 10), min_size=6, max_size=6))
    def test_symmetric(self, xs):
        a, b = vec(*xs[:3]), vec(*xs[3:])
        assert minkowski_inner(a, b) == minkowski_inner(b, a)

    def test_non_finite_coordinates_rejected(self):
        with pytest.raises(NumericalError):
            vec(math.nan, 0.0, 0.0)


class TestProjectTangent:
    def test_already_tangent(self):
        t = h2_project_tangent(ORIGIN, vec(0, 1, 0))
        assert t.tup == (0.0, 1.0, 0.0)

    def test_normal_direction_maps_to_zero(self):
        t = h2_project_tangent(ORIGIN, vec(1, 0, 0))
        assert t.tup == (0.0, 0.0, 0.0)

    def test_mixed_vector(self):
        # <w, p> = -3, so w + (-3) p = (0, 2, 0)
        t = h2_project_tangent(ORIGIN, vec(3, 2, 0))
        assert t.tup == (0.0, 2.0, 0.0)

    @given(h2_points(), st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))
    def test_result_is_tangent(self, p, w0, w1, w2):
        t = h2_project_tangent(p, vec(w0, w1, w2))
        assert abs(minkowski_inner(t.w, p.v)) < 1e-9 * (1 + p.v.x0 ** 2)


class TestExp:
    def test_zero_arclength(self):
        assert h2_exp(ORIGIN, E1, 0.0).tup == (1.0, 0.0, 0.0)

    def test_unit_arclength(self):
        q = h2_exp(ORIGIN, E1, 1.0)
        assert q.tup == pytest.approx((1.5430806348, 1.1752011936, 0.0), abs=1e-9)

    def test_negative_arclength_other_axis(self):
        q = h2_exp(ORIGIN, E2, -1.0)
        assert q.tup == pytest.approx((1.5430806348, 0.0, -1.1752011936), abs=1e-9)

    def test_non_unit_rejected(self):
        bad = H2Tangent(ORIGIN, vec(0.0, 0.5, 0.0))
        with pytest.raises(NonUnitTangent):
            h2_exp(ORIGIN, bad, 1.0)

    @given(h2_unit_tangents(), st.floats(-10, 10))
    @settings(max_examples=150)
    def test_stays_on_sheet_and_distance(self, v, s):
        q = h2_exp(v.base, v, s)
        assert abs(minkowski_inner(q.v, q.v) + 1.0) < 1e-9 * (1 + q.v.x0 ** 2)
        # arccosh near 1 cannot resolve distances below sqrt(eps) * scale;
        # away from the model origin that floor scales with the coordinates
        floor = 1e-7 * v.base.v.x0
        assert h2_dist(v.base, q) == pytest.approx(
            abs(s), abs=1e-9 * (1 + abs(s)) + floor)


class TestDist:
    def test_coincident(self):
        assert h2_dist(ORIGIN, ORIGIN) == 0.0

    def test_inverts_exp(self):
        q = H2Point.of((math.cosh(1.0), math.sinh(1.0), 0.0))
        assert h2_dist(ORIGIN, q) == pytest.approx(1.0, abs=1e-12)

    def test_through_origin(self):
        p = H2Point.of((math.cosh(1.0), math.sinh(1.0), 0.0))
        q = H2Point.of((math.cosh(1.0), -math.sinh(1.0), 0.0))
        assert h2_dist(p, q) == pytest.approx(2.0, abs=1e-12)

    @given(h2_points(), h2_points())
    def test_symmetric(self, p, q):
        assert h2_dist(p, q) == h2_dist(q, p)

    @given(h2_points(), h2_points(), h2_points())
    @settings(max_examples=150)
    def test_triangle_inequality(self, p, q, r):
        assert h2_dist(p, r) <= h2_dist(p, q) + h2_dist(q, r) + 1e-9


class TestCovariantDeriv:
    def test_geodesic_velocity_is_parallel(self):
        c = curve_from_curvature(lambda s: 0.0, (0.0, 2.0), 1e-3)
        for s in (0.3, 1.0, 1.7):
            acc = h2_covariant_deriv(c, c.tangents, s)
            assert acc.norm() < 1e-6

    def test_constant_field_along_geodesic(self):
        c = curve_from_curvature(lambda s: 0.0, (-1.0, 1.0), 1e-3)
        field = np.tile([0.0, 0.0, 1.0], (len(c.s), 1))
        acc = h2_covariant_deriv(c, field, 0.0)
        assert acc.norm() < 1e-6

    def test_circle_velocity_norm_is_geodesic_curvature(self, circle_curve):
        for s in (0.5, 2.0, 5.0):
            acc = h2_covariant_deriv(circle_curve, circle_curve.tangents, s)
            assert acc.norm() == pytest.approx(COTH1, abs=1e-8)

    def test_out_of_range(self):
        c = curve_from_curvature(lambda s: 0.0, (0.0, 1.0), 1e-3)
        with pytest.raises(OutOfDomain):
            h2_covariant_deriv(c, c.tangents, 2.0)


class TestCurveFromCurvature:
    def test_zero_curvature_is_geodesic(self):
        # coordinatewise against the closed form: sharper than h2_dist,
        # whose arccosh floor is ~3e-8 for coincident points
        c = curve_from_curvature(lambda s: 0.0, (0.0, 2.0), 1e-3)
        exact = np.array([h2_exp(ORIGIN, E1, float(s)).tup for s in c.s])
        assert np.max(np.abs(c.points - exact)) < 1e-8

    def test_circle_closes(self, circle_curve):
        end = H2Point.of(tuple(circle_curve.points[-1]))
        start = H2Point.of(tuple(circle_curve.points[0]))
        assert h2_dist(start, end) < 1e-5
        # cross-check at halved step
        c2 = curve_from_curvature(lambda s: COTH1,
                                  (0.0, 2.0 * math.pi * math.sinh(1.0)), 5e-4)
        assert h2_dist(H2Point.of(tuple(c2.points[0])),
                       H2Point.of(tuple(c2.points[-1]))) < 1e-5

    def test_inflection_at_zero(self):
        c = curve_from_curvature(lambda s: s, (-1.0, 1.0), 1e-3)
        assert abs(measure_geodesic_curvature(c, 0.0)) < 1e-6

    @pytest.mark.parametrize("k", [0.5, -1.0, 3.0, 5.0])
    def test_measured_curvature_identity_constant(self, k):
        c = curve_from_curvature(lambda s: k, (0.0, 1.0), 1e-3)
        _, kg = curvature_profile(c)
        assert np.max(np.abs(kg - k)) < 1e-5

    def test_measured_curvature_identity_linear(self):
        c = curve_from_curvature(lambda s: 2.0 * s - 1.0, (0.0, 2.0), 1e-3)
        svals, kg = curvature_profile(c)
        assert np.max(np.abs(kg - (2.0 * svals - 1.0))) < 1e-5

    def test_constraint_drift(self, circle_curve):
        p, t = circle_curve.points, circle_curve.tangents
        pp = -p[:, 0] ** 2 + p[:, 1] ** 2 + p[:, 2] ** 2
        tt = -t[:, 0] ** 2 + t[:, 1] ** 2 + t[:, 2] ** 2
        tp = -t[:, 0] * p[:, 0] + t[:, 1] * p[:, 1] + t[:, 2] * p[:, 2]
        assert np.max(np.abs(pp + 1.0)) < 1e-9
        assert np.max(np.abs(tt - 1.0)) < 1e-9
        assert np.max(np.abs(tp)) < 1e-9

    def test_non_finite_curvature_rejected(self):
        with pytest.raises(BadCurvatureFunction):
            curve_from_curvature(lambda s: math.nan, (0.0, 1.0), 1e-2)

    def test_unit_speed_required_for_samples(self):
        c = curve_from_curvature(lambda s: 0.0, (0.0, 1.0), 1e-2)
        with pytest.raises(NumericalError):
            H2Curve.from_samples(c.s, c.points, 1.1 * c.tangents)

    def test_dense_eval_matches_nodes(self, circle_curve):
        s = float(circle_curve.s[100]) + 0.5 * circle_curve.step
        p, t = circle_curve.eval(s)
        assert abs(minkowski_inner(p.v, p.v) + 1.0) < 1e-12
        assert abs(minkowski_inner(t.w, t.w) - 1.0) < 1e-12
        assert h2_dist(H2Point.of(tuple(circle_curve.points[100])), p) == \
            pytest.approx(0.5 * circle_curve.step, abs=1e-8)
