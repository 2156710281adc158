"""Numerical geometry of surfaces in the product of the hyperbolic plane
(hyperboloid model, curvature -1) and the real line.

Subpackages by topic: ``minkowski`` and ``hyperbolic`` for the plane itself,
``product`` for the ambient space, ``surfaces`` for chart presets,
``curvature`` for pointwise shape data, ``flows`` for asymptotic-line
tracing, ``classifier`` for cylinder detection, ``verification`` and ``cli``
for the batch entry points.
"""

from .errors import GeometryError
from .minkowski import SpacetimeVec, minkowski_inner
from .hyperbolic import (H2Curve, H2Point, H2Tangent, curve_from_curvature,
                         h2_covariant_deriv, h2_dist, h2_exp,
                         h2_project_tangent, measure_geodesic_curvature)
from .product import (AmbientVec, DivergenceReport, H2Geodesic, ProdGeodesic,
                      ProdPoint, ProdTangent, prod_dist, prod_exp,
                      prod_geodesic_residual, prod_metric,
                      verify_geodesic_divergence)
from .surfaces import (ChartDomain, Surface, SurfaceJet, from_config,
                       make_cylinder, make_graph, make_slice, perturb)
from .curvature import (FundamentalForms, PointClass, ShapeData,
                        classify_point, curvature_grid, fundamental_forms,
                        shape_data)
from .flows import (AffineFit, GeodesicDeviation, TraceRecord, fit_inverse_H,
                    frame_ode_residuals, geodesic_deviation, trace_asymptotic)
from .classifier import (ClassifierConfig, CylinderVerdict, FlatnessReport,
                         PlanarSetMap, classify_surface, extract_rulings,
                         flatness_scan, planar_set_map,
                         recover_generating_curve)
from .verification import VerificationReport, run_verification

__version__ = "0.1.0"

__all__ = [
    "AffineFit", "AmbientVec", "ChartDomain", "ClassifierConfig",
    "CylinderVerdict", "DivergenceReport", "FlatnessReport",
    "FundamentalForms", "GeodesicDeviation", "GeometryError", "H2Curve",
    "H2Geodesic", "H2Point", "H2Tangent", "PlanarSetMap", "PointClass",
    "ProdGeodesic", "ProdPoint", "ProdTangent", "ShapeData", "SpacetimeVec",
    "Surface", "SurfaceJet", "TraceRecord", "VerificationReport",
    "classify_point", "classify_surface", "curvature_grid",
    "curve_from_curvature", "extract_rulings", "fit_inverse_H",
    "flatness_scan", "frame_ode_residuals", "from_config",
    "fundamental_forms", "geodesic_deviation", "h2_covariant_deriv",
    "h2_dist", "h2_exp", "h2_project_tangent", "make_cylinder", "make_graph",
    "make_slice", "measure_geodesic_curvature", "minkowski_inner", "perturb",
    "planar_set_map", "prod_dist", "prod_exp", "prod_geodesic_residual",
    "prod_metric", "recover_generating_curve", "run_verification",
    "shape_data", "trace_asymptotic", "verify_geodesic_divergence",
]
