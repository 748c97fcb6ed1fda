"""Problem files and machine-readable run reports.

A problem file is a single UTF-8 JSON document:

    {
      "scale": {"kind": "harmonic", "n_max": 50},
      "t0": 0.0, "t1": 1.0,
      "lagrangian": "r^2 - r^4",
      "alpha": 0.0, "beta": 0.0,
      "trajectory": {"kind": "expr", "formula": "0"},
      "scan": {"q_min": -2.5, "q_max": 2.5, "q_count": 41, "tol": 1e-9}
    }

"scale" is a tagged segment spec or a list of them (their union). A
trajectory is either an expression in t, sampled onto the scale at load
time, or explicit samples covering every representative point. Validation
errors carry the offending field path.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Optional

import numpy as np

from .calculus import GridFunction
from .errors import ProblemFileError, TsvarError
from .expressions import eval_ast, parse_lagrangian
from .timescale import (
    POINT_TOLERANCE,
    DenseInterval,
    DiscretePoints,
    Geometric,
    TimeScale,
    Uniform,
)
from .variational import Trajectory, VariationalProblem
from .weierstrass import AnalysisReport


@dataclass(frozen=True)
class ScanConfig:
    q_min: Optional[float] = None
    q_max: Optional[float] = None
    q_count: Optional[int] = None
    tol: Optional[float] = None

    def q_grid(self) -> Optional[np.ndarray]:
        if self.q_min is None or self.q_max is None:
            return None
        if self.q_min >= self.q_max:
            raise ProblemFileError("scan.q_min", "must be below scan.q_max")
        return np.linspace(self.q_min, self.q_max, self.q_count or 41)


@dataclass(frozen=True)
class LoadedProblem:
    problem: VariationalProblem
    trajectory: Optional[Trajectory]
    scan: ScanConfig
    path: str


def _need(obj: dict, key: str, field: str):
    if key not in obj:
        raise ProblemFileError(field, "missing required field")
    return obj[key]


def _as_number(value, field: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ProblemFileError(field, f"expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ProblemFileError(field, "must be finite")
    return float(value)


def _as_int(value, field: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ProblemFileError(field, f"expected an integer, got {value!r}")
    return value


def _segment_from_spec(spec: dict, field: str, resolution: Optional[int]):
    if not isinstance(spec, dict):
        raise ProblemFileError(field, "segment spec must be an object with a 'kind'")
    kind = _need(spec, "kind", f"{field}.kind")
    try:
        if kind == "harmonic":
            n_max = _as_int(_need(spec, "n_max", f"{field}.n_max"), f"{field}.n_max")
            if n_max < 2:
                raise ProblemFileError(f"{field}.n_max", "must be >= 2")
            return DiscretePoints(tuple([0.0] + [1.0 / n for n in range(n_max, 0, -1)]))
        if kind == "uniform":
            return Uniform(
                _as_number(_need(spec, "start", f"{field}.start"), f"{field}.start"),
                _as_number(_need(spec, "end", f"{field}.end"), f"{field}.end"),
                _as_number(_need(spec, "step", f"{field}.step"), f"{field}.step"),
            )
        if kind == "geometric":
            return Geometric(
                _as_number(_need(spec, "min", f"{field}.min"), f"{field}.min"),
                _as_number(_need(spec, "max", f"{field}.max"), f"{field}.max"),
                _as_number(_need(spec, "ratio", f"{field}.ratio"), f"{field}.ratio"),
            )
        if kind == "dense":
            res = resolution
            if res is None:
                res = spec.get("resolution", 1000)
            return DenseInterval(
                _as_number(_need(spec, "lo", f"{field}.lo"), f"{field}.lo"),
                _as_number(_need(spec, "hi", f"{field}.hi"), f"{field}.hi"),
                _as_int(res, f"{field}.resolution"),
            )
        if kind == "points":
            values = _need(spec, "values", f"{field}.values")
            if not isinstance(values, list) or not values:
                raise ProblemFileError(f"{field}.values", "expected a nonempty list of numbers")
            return DiscretePoints(
                tuple(_as_number(v, f"{field}.values[{i}]") for i, v in enumerate(values))
            )
    except ProblemFileError:
        raise
    except TsvarError as e:
        raise ProblemFileError(field, str(e)) from None
    raise ProblemFileError(f"{field}.kind", f"unknown scale kind {kind!r}")


def scale_from_spec(spec, field: str = "scale", resolution: Optional[int] = None) -> TimeScale:
    specs = spec if isinstance(spec, list) else [spec]
    if not specs:
        raise ProblemFileError(field, "scale spec list is empty")
    segments = []
    metadata = {}
    for i, s in enumerate(specs):
        sub = f"{field}[{i}]" if isinstance(spec, list) else field
        segments.append(_segment_from_spec(s, sub, resolution))
        if isinstance(s, dict) and s.get("kind") == "harmonic":
            metadata = {"kind": "harmonic", "n_max": s["n_max"], "truncation_point": 0.0}
    if len(specs) == 1 and isinstance(specs[0], dict) and not metadata:
        metadata = {"kind": specs[0].get("kind")}
    try:
        return TimeScale(segments, metadata=metadata)
    except TsvarError as e:
        raise ProblemFileError(field, str(e)) from None


def _trajectory_from_spec(spec: dict, scale: TimeScale, field: str) -> Trajectory:
    if not isinstance(spec, dict):
        raise ProblemFileError(field, "trajectory must be an object with a 'kind'")
    kind = _need(spec, "kind", f"{field}.kind")
    if kind == "expr":
        formula = _need(spec, "formula", f"{field}.formula")
        try:
            ast = parse_lagrangian(str(formula)).ast
            values = [eval_ast(ast, {"t": float(t)}) for t in scale.points]
        except TsvarError as e:
            raise ProblemFileError(f"{field}.formula", str(e)) from None
        return GridFunction(scale, np.array(values, dtype=float), name=str(formula))
    if kind == "samples":
        pts = _need(spec, "points", f"{field}.points")
        vals = _need(spec, "values", f"{field}.values")
        if not isinstance(pts, list) or not isinstance(vals, list) or len(pts) != len(vals):
            raise ProblemFileError(field, "'points' and 'values' must be lists of equal length")
        given = {}
        for i, (p, v) in enumerate(zip(pts, vals)):
            given[_as_number(p, f"{field}.points[{i}]")] = _as_number(v, f"{field}.values[{i}]")
        keys = sorted(given)
        values = np.empty(len(scale))
        for i, t in enumerate(scale.points):
            j = int(np.searchsorted(keys, t))
            hit = None
            for k in (j - 1, j):
                if 0 <= k < len(keys) and abs(keys[k] - t) <= POINT_TOLERANCE:
                    hit = keys[k]
            if hit is None:
                raise ProblemFileError(
                    f"{field}.points", f"no sample for scale point t={float(t)!r}"
                )
            values[i] = given[hit]
        if len(keys) != len(scale):
            raise ProblemFileError(
                f"{field}.points", "sample points do not match the scale's representative points"
            )
        return GridFunction(scale, values, name="samples")
    raise ProblemFileError(f"{field}.kind", f"unknown trajectory kind {kind!r}")


def load_problem(path: str, resolution: Optional[int] = None) -> LoadedProblem:
    """Load and validate a problem file; raises ProblemFileError."""
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as e:
        raise ProblemFileError("file", str(e)) from None
    except json.JSONDecodeError as e:
        raise ProblemFileError("file", f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None
    if not isinstance(doc, dict):
        raise ProblemFileError("file", "top level must be a JSON object")

    scale = scale_from_spec(_need(doc, "scale", "scale"), "scale", resolution)
    try:
        lagr = parse_lagrangian(str(_need(doc, "lagrangian", "lagrangian")))
    except TsvarError as e:
        raise ProblemFileError("lagrangian", str(e)) from None
    try:
        problem = VariationalProblem(
            scale,
            _as_number(_need(doc, "t0", "t0"), "t0"),
            _as_number(_need(doc, "t1", "t1"), "t1"),
            lagr,
            _as_number(_need(doc, "alpha", "alpha"), "alpha"),
            _as_number(_need(doc, "beta", "beta"), "beta"),
        )
    except ProblemFileError:
        raise
    except TsvarError as e:
        raise ProblemFileError("t0", str(e)) from None

    trajectory = None
    if doc.get("trajectory") is not None:
        trajectory = _trajectory_from_spec(doc["trajectory"], scale, "trajectory")

    scan = ScanConfig()
    if doc.get("scan") is not None:
        s = doc["scan"]
        if not isinstance(s, dict):
            raise ProblemFileError("scan", "must be an object")
        scan = ScanConfig(
            q_min=_as_number(s["q_min"], "scan.q_min") if "q_min" in s else None,
            q_max=_as_number(s["q_max"], "scan.q_max") if "q_max" in s else None,
            q_count=_as_int(s["q_count"], "scan.q_count") if "q_count" in s else None,
            tol=_as_number(s["tol"], "scan.tol") if "tol" in s else None,
        )
    return LoadedProblem(problem=problem, trajectory=trajectory, scan=scan, path=path)


# -- run reports ----------------------------------------------------------------


def make_provenance(path: str, tool_version: str) -> dict:
    return {
        "file": path,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "tool_version": tool_version,
    }


def analysis_to_document(analysis: Optional[AnalysisReport]) -> dict:
    if analysis is None:
        return {
            "el_max_residual": None,
            "convexity_ok": None,
            "convexity_counterexample": None,
            "weierstrass_violations": None,
            "verdict": None,
        }
    cx = analysis.convexity_counterexample
    return {
        "el_max_residual": analysis.el_max_residual,
        "convexity_ok": analysis.convexity_ok,
        "convexity_counterexample": None
        if cx is None
        else {
            "t": cx.t,
            "x": cx.x,
            "r1": cx.r1,
            "r2": cx.r2,
            "gamma": cx.gamma,
            "lhs": cx.lhs,
            "rhs": cx.rhs,
        },
        "weierstrass_violations": [
            {
                "t": v.t,
                "x_sigma": v.x_sigma,
                "r": v.r,
                "q": v.q,
                "E": v.E,
                "slope_kind": v.slope_kind.value,
            }
            for v in analysis.weierstrass_violations
        ],
        "verdict": analysis.verdict.value,
    }


def build_run_report(
    provenance: dict,
    functional_value: Optional[float] = None,
    norm_strong: Optional[float] = None,
    norm_weak: Optional[float] = None,
    analysis: Optional[AnalysisReport] = None,
    extra: Optional[dict] = None,
) -> dict:
    doc = {
        "functional_value": functional_value,
        "norm_strong": norm_strong,
        "norm_weak": norm_weak,
        **analysis_to_document(analysis),
        "provenance": provenance,
    }
    if extra:
        doc.update(extra)
    return doc


def serialize_report(doc: dict) -> str:
    """Canonical rendering; serialize -> parse -> serialize is byte-identical."""
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_report(path: str, doc: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_report(doc))
