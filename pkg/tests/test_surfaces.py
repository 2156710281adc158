"""Chart presets: jets, consistency between derivative modes, perturbation,
and the JSON config constructor."""

import math

import numpy as np
import pytest

from h2xr.curvature import curvature_grid, fundamental_forms, shape_at
from h2xr.errors import ConfigError, NonUnitCurve, NotImmersed, OutOfDomain
from h2xr.hyperbolic import curve_from_curvature
from h2xr.minkowski import SpacetimeVec, _mdot
from h2xr.product import AmbientVec, ProdPoint
from h2xr.surfaces import (ChartDomain, SurfaceJet, bilinear_height,
                           finite_difference_surface, from_config,
                           linear_height, make_cylinder, make_graph,
                           make_slice, perturb, preset, rescale_chart,
                           zero_height)
from h2xr.hyperbolic import H2Point


def probe_points(surface, n=4, inset=0.05):
    (u0, u1) = surface.domain.u_range
    (v0, v1) = surface.domain.v_range
    us = np.linspace(u0 + inset * (u1 - u0), u1 - inset * (u1 - u0), n)
    vs = np.linspace(v0 + inset * (v1 - v0), v1 - inset * (v1 - v0), n)
    return [(float(u), float(v)) for u in us for v in vs]


class TestChartDomain:
    def test_validation(self):
        with pytest.raises(ConfigError):
            ChartDomain((1.0, 1.0), (0.0, 1.0))
        with pytest.raises(ConfigError):
            ChartDomain((0.0, math.inf), (0.0, 1.0))

    def test_contains(self):
        d = ChartDomain((0.0, 1.0), (-1.0, 1.0))
        assert d.contains(0.5, 0.0)
        assert not d.contains(1.5, 0.0)


class TestCylinder:
    def test_vertical_derivatives_vanish_exactly(self, circle_cylinder):
        for (u, v) in probe_points(circle_cylinder):
            jet = circle_cylinder.jet(u, v)
            assert jet.Xuv.htup == (0.0, 0.0, 0.0) and jet.Xuv.t == 0.0
            assert jet.Xvv.htup == (0.0, 0.0, 0.0) and jet.Xvv.t == 0.0
            assert _mdot(jet.Xv.htup, jet.Xv.htup) + jet.Xv.t ** 2 == 1.0

    def test_non_unit_curve_rejected(self):
        c = curve_from_curvature(lambda s: 0.0, (0.0, 1.0), 1e-2)
        c.tangents[:] *= 1.1  # doctor the samples behind the type's back
        with pytest.raises(NonUnitCurve):
            make_cylinder(c)

    def test_out_of_domain(self, circle_cylinder):
        with pytest.raises(OutOfDomain):
            circle_cylinder.jet(100.0, 0.0)


class TestSlice:
    def test_intrinsic_curvature_minus_one(self, slice_surface):
        for (u, v) in probe_points(slice_surface):
            _, sd = shape_at(slice_surface, u, v, with_brioschi=False)
            assert sd.Kint_gauss == pytest.approx(-1.0, abs=1e-12)

    def test_totally_geodesic(self, slice_surface):
        for (u, v) in probe_points(slice_surface):
            _, sd = shape_at(slice_surface, u, v, with_brioschi=False)
            assert sd.Kext == 0.0

    def test_height_invariance(self):
        lo = make_slice(0.0, 2.0)
        hi = make_slice(5.0, 2.0)
        for (u, v) in probe_points(lo):
            _, sd0 = shape_at(lo, u, v, with_brioschi=False)
            _, sd5 = shape_at(hi, u, v, with_brioschi=False)
            assert sd0.k1 == sd5.k1 and sd0.k2 == sd5.k2
            assert sd0.Kint_gauss == sd5.Kint_gauss


class TestGraph:
    def test_zero_height_reproduces_slice_curvatures(self):
        g = make_graph(zero_height())
        for (u, v) in probe_points(g):
            _, sd = shape_at(g, u, v, with_brioschi=False)
            assert sd.Kint_gauss == pytest.approx(-1.0, abs=1e-12)
            assert sd.Kext == pytest.approx(0.0, abs=1e-12)

    def test_linear_height_flat_along_axis(self):
        g = make_graph(linear_height(0.5))
        for u in (-0.8, -0.2, 0.3, 0.9):
            _, sd = shape_at(g, u, 0.0, with_brioschi=False)
            assert abs(sd.Kext) < 1e-12

    def test_bilinear_has_generic_points(self):
        g = make_graph(bilinear_height(0.3))
        forms, sd = shape_at(g, 0.4, -0.3, with_brioschi=False)
        assert 0.0 < abs(forms.nu) < 1.0
        assert abs(sd.Kext) > 1e-3


class TestPerturb:
    def test_eps_zero_is_identity(self, circle_cylinder):
        assert perturb(circle_cylinder, 0.0) is circle_cylinder

    def test_cylinder_bump_not_flat(self, perturbed_cylinder):
        grid = curvature_grid(perturbed_cylinder, 20, 20)
        worst = max(abs(r.Kint_gauss) for r in grid.valid_rows())
        assert worst > 1e-5

    def test_slice_bump_stays_curved(self):
        p = preset("perturbed_slice")
        uc, vc = p.domain.center
        _, sd = shape_at(p, uc, vc, with_brioschi=False)
        assert sd.Kint_gauss == pytest.approx(-1.0, abs=0.2)

    def test_negative_eps_rejected(self, circle_cylinder):
        with pytest.raises(ConfigError):
            perturb(circle_cylinder, -1.0)


class TestFiniteDifferenceJets:
    @pytest.mark.parametrize("name", ["slice", "cylinder_circle"])
    def test_agree_with_analytic(self, name):
        analytic = preset(name)
        fd = finite_difference_surface(analytic)
        for (u, v) in probe_points(analytic, n=3):
            ja = analytic.jet(u, v)
            jf = fd.jet(u, v)
            for attr in ("Xu", "Xv"):
                a, f = getattr(ja, attr), getattr(jf, attr)
                assert np.allclose(a.htup, f.htup, atol=1e-6)
                assert abs(a.t - f.t) < 1e-6
            for attr in ("Xuu", "Xuv", "Xvv"):
                a, f = getattr(ja, attr), getattr(jf, attr)
                assert np.allclose(a.htup, f.htup, atol=1e-4)
                assert abs(a.t - f.t) < 1e-4

    def test_graph_mode(self):
        g = make_graph(bilinear_height(0.3))
        fd = finite_difference_surface(g)
        assert fd.derivative_mode == "finite-difference"
        ja = g.jet(0.3, 0.2)
        jf = fd.jet(0.3, 0.2)
        assert np.allclose(ja.Xuv.htup, jf.Xuv.htup, atol=1e-4)
        assert abs(ja.Xuv.t - jf.Xuv.t) < 1e-4


class TestImmersionInvariant:
    @pytest.mark.parametrize("name", ["cylinder_geodesic", "cylinder_circle",
                                      "cylinder_inflection", "slice",
                                      "perturbed_cylinder"])
    def test_gram_determinant_positive(self, name):
        s = preset(name)
        for (u, v) in probe_points(s, n=3):
            forms = fundamental_forms(s, u, v)
            assert forms.E * forms.G - forms.F ** 2 > 1e-12

    def test_degenerate_jet_rejected(self):
        x = ProdPoint(H2Point.of((1.0, 0.0, 0.0)), 0.0)
        w = AmbientVec(SpacetimeVec.of((0.0, 1.0, 0.0)), 0.0)
        zero = AmbientVec(SpacetimeVec.of((0.0, 0.0, 0.0)), 0.0)
        with pytest.raises(NotImmersed):
            SurfaceJet(X=x, Xu=w, Xv=w, Xuu=zero, Xuv=zero, Xvv=zero)


class TestRescale:
    def test_domain_and_points_correspond(self, circle_cylinder):
        r = rescale_chart(circle_cylinder, 2.0, 3.0)
        j0 = circle_cylinder.jet(1.0, 0.75)
        j1 = r.jet(0.5, 0.25)
        assert j0.X.h.tup == j1.X.h.tup
        assert j0.X.t == j1.X.t


class TestFromConfig:
    def test_unknown_kind(self):
        with pytest.raises(ConfigError):
            from_config({"kind": "sphere"})

    def test_bad_domain(self):
        with pytest.raises(ConfigError):
            from_config({"kind": "cylinder", "curve": {"kind": "constant", "value": 0.0},
                         "domain": {"u": [2.0, 1.0]}})

    def test_bad_spline(self):
        with pytest.raises(ConfigError):
            from_config({"kind": "cylinder",
                         "curve": {"kind": "spline", "knots_s": [0, 1], "knots_k": [1]}})

    def test_slice_requires_positive_radius(self):
        with pytest.raises(ConfigError):
            from_config({"kind": "slice", "t0": 0.0, "radius": -2.0})

    def test_cylinder_roundtrip(self):
        s = from_config({"kind": "cylinder", "curve": {"kind": "constant", "value": 1.0},
                         "domain": {"u": [0.0, 2.0], "v": [-1.0, 1.0]}})
        assert s.domain.u_range == (0.0, 2.0)
        assert s.domain.v_range == (-1.0, 1.0)
        _, sd = shape_at(s, 1.0, 0.0, with_brioschi=False)
        assert sd.k2 == pytest.approx(1.0, abs=1e-9)

    def test_perturbed_config(self):
        s = from_config({"kind": "perturbed", "eps": 1e-2,
                         "base": {"kind": "slice", "t0": 0.0, "radius": 2.0},
                         "bump": {"center": [1.0, 3.0], "width": 0.5}})
        assert "bump" in s.label or "perturbed" in s.label
