"""Cylinder detection pipeline: flatness, planar mapping, rulings, recovery."""

import json
import math

import numpy as np
import pytest

from h2xr.classifier import (CYLINDER, NOT_FLAT, classify_surface,
                             extract_rulings, flatness_scan, planar_set_map,
                             recover_generating_curve, verdict_to_json)
from h2xr.errors import EmptyIntersection, NotParabolic
from h2xr.hyperbolic import (H2Point, curvature_profile, curve_hausdorff,
                             h2_covariant_deriv, h2_dist,
                             measure_geodesic_curvature)
from h2xr.product import ProdGeodesic, ProdPoint, ProdTangent
from h2xr.hyperbolic import H2Tangent
from h2xr.minkowski import SpacetimeVec
from h2xr.verification import parabolic_seeds

from conftest import COTH1


class TestFlatnessScan:
    def test_circle_cylinder_passes(self, circle_cylinder):
        rep = flatness_scan(circle_cylinder, 20, 1e-6)
        assert rep.passed
        assert rep.max_abs_Kint < 1e-8
        assert rep.max_abs_Kext < 1e-10

    def test_slice_fails_with_unit_curvature(self, slice_surface):
        rep = flatness_scan(slice_surface, 20, 1e-6)
        assert not rep.passed
        assert rep.max_abs_Kint == pytest.approx(1.0, abs=1e-9)

    def test_perturbed_cylinder_fails(self, perturbed_cylinder):
        assert not flatness_scan(perturbed_cylinder, 20, 1e-6).passed


class TestPlanarSetMap:
    def test_inflection_vertical_strip(self, inflection_cylinder):
        pmap = planar_set_map(inflection_cylinder, n=21)
        assert len(pmap.components) == 1
        comp = pmap.components[0]
        du = 3.0 / 21.0
        assert comp.u_range[0] <= 0.0 <= comp.u_range[1]
        assert comp.u_range[1] - comp.u_range[0] <= 2.0 * du + 1e-9
        # the strip runs the full height of the chart
        assert comp.v_range[0] == pytest.approx(-3.0, abs=1e-12)
        assert comp.v_range[1] == pytest.approx(3.0, abs=1e-12)

    def test_circle_has_no_planar_cells(self, circle_cylinder):
        pmap = planar_set_map(circle_cylinder, n=21)
        assert pmap.components == []

    def test_geodesic_cylinder_fully_planar(self, geodesic_cylinder):
        pmap = planar_set_map(geodesic_cylinder, n=21)
        assert len(pmap.components) == 1
        assert len(pmap.components[0].cells) == 21 * 21


class TestExtractRulings:
    def test_circle_rulings_are_vertical(self, circle_cylinder):
        seeds = parabolic_seeds(circle_cylinder, 10)
        rulings = extract_rulings(circle_cylinder, seeds, 5.0, 1e-3, 1e-7)
        assert len(rulings) == 10
        assert max(r.verticality for r in rulings) < 1e-7

    def test_tilted_control_detected(self):
        """A tilted geodesic sampled as a fake ruling drifts by a_h * s."""
        from h2xr.classifier import _ruling_verticality
        from test_flows import control_record
        origin = ProdPoint(H2Point.of((1.0, 0.0, 0.0)), 0.0)
        r2 = math.sqrt(0.5)
        geo = ProdGeodesic.from_tangent(ProdTangent(
            origin, H2Tangent(origin.h, SpacetimeVec.of((0.0, r2, 0.0))), r2))
        s = np.arange(0.0, 1.0 + 5e-4, 1e-3)
        pts = [geo.point(float(v)) for v in s]
        tr = control_record(s, np.zeros((len(s), 2)),
                            [p.h.tup for p in pts], [p.t for p in pts], 1e-3)
        drift = _ruling_verticality(tr)
        assert drift == pytest.approx(r2, abs=1e-9)

    def test_geodesic_cylinder_has_no_parabolic_seeds(self, geodesic_cylinder):
        with pytest.raises(NotParabolic):
            extract_rulings(geodesic_cylinder, [(0.0, 0.0)], 5.0, 1e-3, 1e-7)


class TestRecovery:
    def test_circle_curvature_recovered(self, circle_cylinder):
        rec = recover_generating_curve(circle_cylinder, 0.0, 1201)
        # measured through the covariant-derivative oracle on the samples
        for s in np.linspace(rec.s_min + 0.2, rec.s_max - 0.2, 7):
            acc = h2_covariant_deriv(rec, rec.tangents, float(s))
            assert acc.norm() == pytest.approx(COTH1, abs=1e-5)

    def test_inflection_profile_recovered_at_height_two(self, inflection_cylinder):
        rec = recover_generating_curve(inflection_cylinder, 2.0, 1201)
        u0 = inflection_cylinder.domain.u_range[0]
        for k in range(100, 1101, 200):  # node positions; the oracle measures there
            s = float(rec.s[k])
            measured = measure_geodesic_curvature(rec, s)
            assert measured == pytest.approx(u0 + s, abs=1e-4)

    def test_slice_misses_offset_height(self, slice_surface):
        with pytest.raises(EmptyIntersection):
            recover_generating_curve(slice_surface, 1.0, 301)


class TestClassifySurface:
    def test_circle_cylinder(self, circle_cylinder):
        v = classify_surface(circle_cylinder)
        assert v.verdict == CYLINDER
        assert v.ruling_verticality < 1e-7
        assert v.generating_curve is not None

    def test_slice_not_flat(self, slice_surface):
        v = classify_surface(slice_surface)
        assert v.verdict == NOT_FLAT
        assert v.evidence.flatness.max_abs_Kint == pytest.approx(1.0, abs=1e-9)

    def test_inflection_mixed_sets(self, inflection_cylinder):
        v = classify_surface(inflection_cylinder)
        assert v.verdict == CYLINDER
        assert v.evidence.planar_map is not None
        assert len(v.evidence.planar_map.components) == 1  # the planar strip
        assert len(v.evidence.rulings) >= 5

    def test_geodesic_cylinder_planar_branch(self, geodesic_cylinder):
        v = classify_surface(geodesic_cylinder)
        assert v.verdict == CYLINDER
        assert v.evidence.rulings == []
        assert v.generating_curve is not None
        _, kg = curvature_profile(v.generating_curve)
        assert np.max(np.abs(kg)) < 1e-6

    def test_recovered_curve_hausdorff(self, circle_cylinder, circle_curve):
        v = classify_surface(circle_cylinder)
        assert curve_hausdorff(v.generating_curve, circle_curve) < 1e-5

    def test_t0_independence(self, circle_cylinder):
        a = recover_generating_curve(circle_cylinder, -1.0, 801)
        b = recover_generating_curve(circle_cylinder, 1.5, 801)
        worst = max(h2_dist(H2Point.of(tuple(a.points[i])),
                            H2Point.of(tuple(b.points[i])))
                    for i in range(0, len(a.s), 40))
        assert worst < 1e-6


class TestVerdictJson:
    def test_schema_keys(self, circle_cylinder):
        v = classify_surface(circle_cylinder)
        d = verdict_to_json(v)
        for key in ("verdict", "ruling_verticality", "flatness",
                    "planar_components", "generating_curve"):
            assert key in d
        assert d["verdict"] == CYLINDER
        assert isinstance(d["generating_curve"], list)
        assert len(d["generating_curve"][0]) == 3
        json.dumps(d)  # must be serializable (no NaN)

    def test_not_flat_serialization(self, slice_surface):
        d = verdict_to_json(classify_surface(slice_surface))
        assert d["verdict"] == NOT_FLAT
        assert d["generating_curve"] is None
        json.dumps(d)
