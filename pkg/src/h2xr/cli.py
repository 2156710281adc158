"""Command-line front end: scans, traces, classification, verification.

Commands
--------
  curvature     write a curvature table (CSV) and a JSON summary
  trace         trace an asymptotic line; CSV samples plus a JSON sidecar
  classify      run the cylinder detection pipeline; JSON verdict
  geodesic      evaluate a closed-form product geodesic to CSV
  verify-paper  run the consolidated verification suite; JSON + text report

Global flags: ``--config PATH`` (JSON run configuration), ``--out DIR``,
``--tol KEY=VAL`` (repeatable; keys flatness, verticality, planar),
``--jobs N``, ``--seed N``.

Exit codes: 0 success (including NOT_FLAT verdicts), 1 verification suite
failed, 2 bad configuration, 3 numerical failure, 4 trace seeded at a
non-parabolic point, 5 INCONSISTENT verdict.

Surface JSON schema
-------------------
::

  {"kind": "cylinder",
   "curve": {"kind": "constant", "value": K}
          | {"kind": "linear", "slope": A, "intercept": B}
          | {"kind": "spline", "knots_s": [...], "knots_k": [...]},
   "domain": {"u": [u0, u1], "v": [v0, v1]},   # optional
   "curve_step": 0.001}                         # optional

  {"kind": "slice", "t0": T, "radius": R}

  {"kind": "graph",
   "f": {"kind": "bilinear", "coef": C} | {"kind": "linear", "a": A}
      | {"kind": "zero"},
   "domain": {"u": [u0, u1], "v": [v0, v1]}}   # optional

  {"kind": "perturbed", "base": {...}, "eps": E,
   "bump": {"center": [u, v], "width": W}}      # bump optional

Run configuration schema (all fields optional)::

  {"surface": {...},                  # as above
   "grid": {"nu": 20, "nv": 20},
   "trace": {"length": 5.0, "step": 0.001},
   "tol": {"flatness": 1e-6, "verticality": 1e-6, "planar": 1e-7},
   "corpus": [{"label": L, "surface": {...}, "expect": "CYLINDER",
               "fd": false}, ...]}   # verify-paper corpus override

Outputs are deterministic: a fixed config and seed produce byte-identical
files.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .classifier import ClassifierConfig, INCONSISTENT, classify_surface, verdict_to_json
from .curvature import curvature_grid
from .errors import (ConfigError, GeometryError, NotParabolic, NumericalError,
                     OutOfDomain)
from .flows import (fit_inverse_H, frame_ode_residuals, geodesic_deviation,
                    trace_asymptotic)
from .hyperbolic import H2Point, H2Tangent
from .minkowski import SpacetimeVec, _mdot, _project_tangent
from .product import ProdGeodesic, ProdPoint, ProdTangent
from .surfaces import from_config
from .verification import report_to_json, report_to_text, run_verification

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_BAD_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_NOT_PARABOLIC = 4
EXIT_INCONSISTENT = 5

_TOL_KEYS = ("flatness", "verticality", "planar")


@dataclass
class RunConfig:
    surface: dict | None = None
    grid_nu: int = 20
    grid_nv: int = 20
    trace_length: float = 5.0
    trace_step: float = 1e-3
    tols: dict = field(default_factory=lambda: {"flatness": 1e-6,
                                                "verticality": 1e-6,
                                                "planar": 1e-7})
    out: Path = Path(".")
    seed: int = 0
    jobs: int = 1
    corpus: list | None = None

    def classifier_config(self) -> ClassifierConfig:
        return ClassifierConfig(flatness_tol=self.tols["flatness"],
                                verticality_tol=self.tols["verticality"],
                                planar_tol=self.tols["planar"],
                                trace_length=self.trace_length,
                                trace_step=self.trace_step,
                                jobs=self.jobs)


def _positive(x, name: str) -> float:
    if not isinstance(x, (int, float)) or not math.isfinite(x) or x <= 0.0:
        raise ConfigError(f"{name} must be a positive number, got {x!r}")
    return float(x)


def load_run_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    raw = {}
    if args.config:
        try:
            raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except FileNotFoundError as exc:
            raise ConfigError(f"config file not found: {args.config}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("run config must be a JSON object")
    cfg.surface = raw.get("surface")
    grid = raw.get("grid", {})
    if not isinstance(grid, dict):
        raise ConfigError("'grid' must be an object")
    cfg.grid_nu = int(grid.get("nu", 20))
    cfg.grid_nv = int(grid.get("nv", 20))
    if cfg.grid_nu < 2 or cfg.grid_nv < 2:
        raise ConfigError("grid sizes must be at least 2")
    trace = raw.get("trace", {})
    if not isinstance(trace, dict):
        raise ConfigError("'trace' must be an object")
    cfg.trace_length = _positive(trace.get("length", 5.0), "trace.length")
    cfg.trace_step = _positive(trace.get("step", 1e-3), "trace.step")
    tol = raw.get("tol", {})
    if not isinstance(tol, dict):
        raise ConfigError("'tol' must be an object")
    for k, v in tol.items():
        if k not in _TOL_KEYS:
            raise ConfigError(f"unknown tolerance key {k!r}")
        cfg.tols[k] = _positive(v, f"tol.{k}")
    for spec in args.tol or []:
        if "=" not in spec:
            raise ConfigError(f"--tol expects KEY=VAL, got {spec!r}")
        k, _, v = spec.partition("=")
        if k not in _TOL_KEYS:
            raise ConfigError(f"unknown tolerance key {k!r}")
        try:
            cfg.tols[k] = _positive(float(v), f"tol.{k}")
        except ValueError as exc:
            raise ConfigError(f"bad tolerance value {v!r}") from exc
    cfg.corpus = raw.get("corpus")
    if cfg.corpus is not None:
        if not isinstance(cfg.corpus, list) or not all(
                isinstance(e, dict) and "surface" in e and "expect" in e
                for e in cfg.corpus):
            raise ConfigError("'corpus' must be a list of {surface, expect} objects")
    cfg.out = Path(args.out)
    cfg.seed = int(args.seed)
    cfg.jobs = max(1, int(args.jobs))
    return cfg


def _require_surface(cfg: RunConfig):
    if cfg.surface is None:
        raise ConfigError("this command needs a 'surface' entry in the config")
    return from_config(cfg.surface)


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _dump_json(path: Path, obj) -> None:
    _write(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


# -- commands ---------------------------------------------------------------------

def cmd_curvature(cfg: RunConfig) -> int:
    surface = _require_surface(cfg)
    grid = curvature_grid(surface, cfg.grid_nu, cfg.grid_nv,
                          tol=cfg.tols["planar"], jobs=cfg.jobs)
    ok = grid.valid_rows()
    if not ok:
        raise NumericalError(f"no grid point of {surface.label} could be evaluated")
    counts: dict[str, int] = {}
    for r in ok:
        counts[r.cls] = counts.get(r.cls, 0) + 1
    summary = {
        "label": surface.label,
        "grid": [cfg.grid_nu, cfg.grid_nv],
        "rows": len(grid.rows),
        "rows_failed": len(grid.rows) - len(ok),
        "max_abs_Kint_gauss": max(abs(r.Kint_gauss) for r in ok),
        "max_abs_Kint_brioschi": max(abs(r.Kint_brioschi) for r in ok),
        "max_abs_Kext": max(abs(r.Kext) for r in ok),
        "class_counts": counts,
    }
    _write(cfg.out / "curvature.csv", grid.to_csv())
    _dump_json(cfg.out / "curvature_summary.json", summary)
    print(f"wrote {cfg.out / 'curvature.csv'} ({len(grid.rows)} rows)")
    return EXIT_OK


def cmd_trace(cfg: RunConfig, u0: float, v0: float) -> int:
    surface = _require_surface(cfg)
    tr = trace_asymptotic(surface, u0, v0, cfg.trace_length, cfg.trace_step,
                          cfg.tols["planar"])
    dev = geodesic_deviation(tr)
    res = frame_ode_residuals(tr)
    sidecar = {
        "label": surface.label,
        "seed": [u0, v0],
        "samples": len(tr),
        "stop_reason": tr.stop_reason,
        "deviation": {"max_dev": dev.max_dev, "at_s": dev.at_s},
        "residuals": {"lambda_ode": res.lambda_ode, "k2_ode": res.k2_ode,
                      "de2": res.de2, "de3": res.de3},
        "fit": None,
    }
    try:
        fit = fit_inverse_H(tr)
        sidecar["fit"] = {"a": fit.a, "b": fit.b,
                          "rms_residual": fit.rms_residual, "n": fit.n}
    except GeometryError:
        pass  # planar samples present; no affine law to fit
    _write(cfg.out / "trace.csv", tr.to_csv())
    _dump_json(cfg.out / "trace_summary.json", sidecar)
    print(f"wrote {cfg.out / 'trace.csv'} ({len(tr)} samples, {tr.stop_reason})")
    return EXIT_OK


def cmd_classify(cfg: RunConfig) -> int:
    surface = _require_surface(cfg)
    verdict = classify_surface(surface, cfg.classifier_config())
    _dump_json(cfg.out / "verdict.json", verdict_to_json(verdict))
    print(f"{surface.label}: {verdict.verdict}")
    return EXIT_INCONSISTENT if verdict.verdict == INCONSISTENT else EXIT_OK


def cmd_geodesic(cfg: RunConfig, point: str, velocity: str,
                 length: float, step: float) -> int:
    try:
        x1, x2, t = (float(x) for x in point.split(","))
        w1, w2, vt = (float(x) for x in velocity.split(","))
    except ValueError as exc:
        raise ConfigError("--point and --velocity expect comma-separated triples") from exc
    if length <= 0.0 or step <= 0.0:
        raise ConfigError("length and step must be positive")
    x0 = math.sqrt(1.0 + x1 * x1 + x2 * x2)
    base = ProdPoint(H2Point.of((x0, x1, x2)), t)
    wh = _project_tangent(base.h.tup, (0.0, w1, w2))
    nh2 = max(0.0, _mdot(wh, wh))
    norm = math.sqrt(nh2 + vt * vt)
    if norm < 1e-12:
        raise ConfigError("velocity must be nonzero")
    tangent = ProdTangent(base, H2Tangent(base.h, SpacetimeVec.of(
        tuple(c / norm for c in wh))), vt / norm)
    geo = ProdGeodesic.from_tangent(tangent)
    lines = ["s,h_x0,h_x1,h_x2,t"]
    n = int(round(length / step))
    for i in range(n + 1):
        s = i * step
        p = geo.point(s)
        lines.append(",".join([repr(s), repr(p.h.v.x0), repr(p.h.v.x1),
                               repr(p.h.v.x2), repr(p.t)]))
    _write(cfg.out / "geodesic.csv", "\n".join(lines) + "\n")
    print(f"wrote {cfg.out / 'geodesic.csv'} ({n + 1} samples)")
    return EXIT_OK


def cmd_verify_paper(cfg: RunConfig) -> int:
    report = run_verification(seed=cfg.seed, corpus=cfg.corpus,
                              classifier_config=cfg.classifier_config())
    _dump_json(cfg.out / "verify_report.json", report_to_json(report))
    text = report_to_text(report)
    _write(cfg.out / "verify_report.txt", text)
    print(text, end="")
    return EXIT_OK if report.overall_pass else EXIT_VERIFY_FAIL


# -- entry point --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="h2xr",
        description="Curvature scans, asymptotic traces and cylinder detection "
                    "for surfaces in the product of the hyperbolic plane and a line.")
    parser.add_argument("--config", help="JSON run configuration", default=None)
    parser.add_argument("--out", help="output directory", default=".")
    parser.add_argument("--tol", action="append", metavar="KEY=VAL",
                        help="tolerance override (flatness, verticality, planar)")
    parser.add_argument("--jobs", type=int, default=1, help="parallel workers")
    parser.add_argument("--seed", type=int, default=0, help="random seed for probes")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("curvature", help="curvature grid scan")

    p_trace = sub.add_parser("trace", help="trace an asymptotic line")
    p_trace.add_argument("u0", type=float)
    p_trace.add_argument("v0", type=float)

    sub.add_parser("classify", help="cylinder detection pipeline")

    p_geo = sub.add_parser("geodesic", help="evaluate a product geodesic")
    p_geo.add_argument("--point", default="0,0,0",
                       help="x1,x2,t (the hyperboloid x0 is derived)")
    p_geo.add_argument("--velocity", default="1,0,0", help="w1,w2,vt")
    p_geo.add_argument("--length", type=float, default=2.0)
    p_geo.add_argument("--step", type=float, default=1e-3)

    sub.add_parser("verify-paper", help="run the consolidated verification suite")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_run_config(args)
        if args.command == "curvature":
            return cmd_curvature(cfg)
        if args.command == "trace":
            return cmd_trace(cfg, args.u0, args.v0)
        if args.command == "classify":
            return cmd_classify(cfg)
        if args.command == "geodesic":
            return cmd_geodesic(cfg, args.point, args.velocity,
                                args.length, args.step)
        if args.command == "verify-paper":
            return cmd_verify_paper(cfg)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    except NotParabolic as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_PARABOLIC
    except (NumericalError, OutOfDomain) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except GeometryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
