"""Run configuration: JSON schema, defaults and aggregated validation."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .measure import Interval, Measure, measure_from_dict
from .quadrature import DEFAULT_POINTS, DEFAULT_SEGMENTS

__all__ = ["RunConfig", "EXPERIMENTS", "load_config", "parse_config"]

EXPERIMENTS = ("recurrence", "kernel", "christoffel", "universality", "localize", "lp", "tau",
               "correlate")

_TOP_KEYS = {"experiment", "measure", "comparison", "quadrature", "params", "output"}
_GRID = {"interval": [-0.5, 0.5], "x_points": 21, "A": 2.0, "ab_points": 17,
         "n_schedule": [100, 200, 400]}

# default parameter set per experiment; keys outside these are rejected
PARAM_DEFAULTS = {
    "recurrence": {"N": 50, "tail_start": None},
    "kernel": {"n": 100, "points": [[0.0, 0.1]]},
    "christoffel": dict(_GRID),
    "universality": dict(_GRID, scaling_mode="kernel", x_grid=None),
    "localize": dict(_GRID, interval=[-0.3, 0.3], n_schedule=[50, 100, 200, 400],
                     check_points=21, check_range=[-0.95, 0.95], check_degrees=[50, 200]),
    "lp": dict(_GRID, n_schedule=[50, 100, 200, 400], p=1.0, variant="normalized"),
    "tau": {"rmax": 4, "limit": None},
    "correlate": {"x": 0.0, "xis": [0.0, 0.5], "n_schedule": [50, 100, 200, 400]},
}
_TAU_LIMIT_KEYS = {"x": 0.0, "r": 1, "s": 1, "n_schedule": [100, 200, 400]}


@dataclass
class RunConfig:
    experiment: str
    measure: Measure
    comparison: Measure | None = None
    segments: int = DEFAULT_SEGMENTS
    points_per_segment: int = DEFAULT_POINTS
    params: dict = field(default_factory=dict)
    out_dir: str | None = None
    formats: tuple = ("csv", "json")

    def to_dict(self) -> dict:
        d = {
            "experiment": self.experiment,
            "measure": self.measure.to_dict(),
            "quadrature": {"segments": self.segments, "points_per_segment": self.points_per_segment},
            "params": self.params,
            "output": {"dir": self.out_dir, "formats": list(self.formats)},
        }
        if self.comparison is not None:
            d["comparison"] = self.comparison.to_dict()
        return d

    @property
    def max_degree(self) -> int:
        p = self.params
        if self.experiment == "recurrence":
            return p["N"]
        if self.experiment == "kernel":
            return p["n"]
        if self.experiment == "tau":
            return max(p["limit"]["n_schedule"]) if p["limit"] else 0
        sched = list(p["n_schedule"])
        if self.experiment == "localize":
            sched += list(p["check_degrees"])
        return max(sched)


def load_config(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config must be a single JSON object")
    return doc


def _is_int(v):
    return isinstance(v, int) and not isinstance(v, bool)


def _is_num(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


def _num_list(v):
    return isinstance(v, list) and all(_is_num(u) for u in v)


def _schedule_ok(v):
    return (isinstance(v, list) and v and all(_is_int(u) and u >= 1 for u in v)
            and all(b > a for a, b in zip(v, v[1:])))


def _interval(v, where, problems):
    if not (_num_list(v) and len(v) == 2):
        problems.append(f"{where} must be [lo, hi]")
        return None
    try:
        return Interval(*v)
    except ValueError as exc:
        problems.append(f"{where}: {exc}")
        return None


def _bulk_offset(x, A, n):
    # K~_n(x, x) ~ n / (pi sqrt(1 - x^2)) for every admissible weight
    return A * math.pi * math.sqrt(max(1.0 - x * x, 0.0)) / n


def _check_shifts(points, offset_fn, n_min, what, problems):
    for x in points:
        off = offset_fn(x, n_min)
        if abs(x) + off >= 1.0:
            problems.append(
                f"shift legality: {what} point x={x:g} with offset {off:.3g} at n={n_min} "
                "leaves (-1, 1)")
            return


def _validate_params(exp, params, problems, m):
    p = params
    if exp == "recurrence":
        if not (_is_int(p["N"]) and p["N"] >= 1):
            problems.append("params.N must be a positive integer")
        elif p["tail_start"] is None:
            p["tail_start"] = p["N"] // 2
        if p["tail_start"] is not None and not (
                _is_int(p["tail_start"]) and _is_int(p["N"]) and 0 <= p["tail_start"] < p["N"]):
            problems.append("params.tail_start must be an integer in [0, N)")
        return
    if exp == "kernel":
        if not (_is_int(p["n"]) and p["n"] >= 1):
            problems.append("params.n must be a positive integer")
        pts = p["points"]
        if not (isinstance(pts, list) and pts and all(_num_list(q) and len(q) == 2 for q in pts)):
            problems.append("params.points must be a nonempty list of [x, y] pairs")
        elif any(abs(c) >= 1 for q in pts for c in q):
            problems.append("params.points must lie in (-1, 1)")
        return
    if exp == "tau":
        if not (_is_int(p["rmax"]) and 0 <= p["rmax"] <= 12):
            problems.append("params.rmax must be an integer in [0, 12]")
        lim = p["limit"]
        if lim is not None:
            if not isinstance(lim, dict) or set(lim) - set(_TAU_LIMIT_KEYS):
                problems.append(f"params.limit must be an object with keys {sorted(_TAU_LIMIT_KEYS)}")
                return
            full = dict(_TAU_LIMIT_KEYS, **lim)
            p["limit"] = full
            if not (_is_int(full["r"]) and _is_int(full["s"]) and full["r"] >= 0 and full["s"] >= 0
                    and full["r"] + full["s"] <= 6):
                problems.append("params.limit.r, s must be nonnegative integers with r + s <= 6")
            if not (_is_num(full["x"]) and abs(full["x"]) < 1):
                problems.append("params.limit.x must lie in (-1, 1)")
            if not _schedule_ok(full["n_schedule"]):
                problems.append("params.limit.n_schedule must be an increasing list of positive integers")
        return
    if not _schedule_ok(p["n_schedule"]):
        problems.append("params.n_schedule must be an increasing list of positive integers")
        return
    n_min = p["n_schedule"][0]
    if exp == "correlate":
        if not (_is_num(p["x"]) and abs(p["x"]) < 1):
            problems.append("params.x must lie in (-1, 1)")
            return
        xis = p["xis"]
        if not (_num_list(xis) and 1 <= len(xis) <= 6):
            problems.append("params.xis must hold 1 to 6 numbers")
        elif len(set(xis)) != len(xis):
            problems.append("params.xis must be distinct")
        else:
            A = max(abs(v) for v in xis)
            _check_shifts([p["x"]], lambda x, n: _bulk_offset(x, A, n), n_min, "correlate", problems)
        return
    J = _interval(p["interval"], "params.interval", problems)
    for key in ("x_points", "ab_points"):
        if not (_is_int(p[key]) and p[key] >= 1):
            problems.append(f"params.{key} must be a positive integer")
    if not (_is_num(p["A"]) and p["A"] > 0):
        problems.append("params.A must be positive")
        return
    A = float(p["A"])
    if J is None or not (_is_int(p["x_points"]) and p["x_points"] >= 1):
        return
    if exp != "localize" and m is not None and m.masses_in(J.lo, J.hi):
        problems.append("measure: point masses must lie outside params.interval")
    pts = J.grid(p["x_points"]).tolist()
    if exp == "universality":
        if p["scaling_mode"] not in ("kernel", "arcsine"):
            problems.append("params.scaling_mode must be 'kernel' or 'arcsine'")
        if p["x_grid"] is not None:
            if not _num_list(p["x_grid"]) or not p["x_grid"]:
                problems.append("params.x_grid must be a nonempty list of numbers")
                return
            if any(not J.lo <= x <= J.hi for x in p["x_grid"]):
                problems.append("params.x_grid must lie within params.interval")
            pts = p["x_grid"]
    if exp == "lp":
        if p["variant"] not in ("normalized", "unnormalized", "arcsine"):
            problems.append("params.variant must be normalized, unnormalized or arcsine")
        if not (_is_num(p["p"]) and p["p"] > 0):
            problems.append("params.p must be positive")
    if exp in ("christoffel", "localize"):
        _check_shifts(pts, lambda x, n: A / n, n_min, exp, problems)
    else:
        _check_shifts(pts, lambda x, n: _bulk_offset(x, A, n), n_min, exp, problems)
    if exp == "localize":
        if not _schedule_ok(p["check_degrees"]):
            problems.append("params.check_degrees must be an increasing list of positive integers")
        if not (_is_int(p["check_points"]) and p["check_points"] >= 1):
            problems.append("params.check_points must be a positive integer")
        rng = p["check_range"]
        if not (_num_list(rng) and len(rng) == 2 and -1 < rng[0] < rng[1] < 1):
            problems.append("params.check_range must be [lo, hi] inside (-1, 1)")


def parse_config(doc: dict) -> RunConfig:
    """Validate a config document fully; raise one ConfigError listing every problem."""
    problems = []
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    extra = set(doc) - _TOP_KEYS
    if extra:
        problems.append(f"unknown top-level keys {sorted(extra)}")
    exp = doc.get("experiment")
    if exp not in EXPERIMENTS:
        problems.append(f"experiment must be one of {list(EXPERIMENTS)}, got {exp!r}")
    measure = None
    if "measure" not in doc:
        problems.append("missing 'measure'")
    else:
        try:
            measure = measure_from_dict(doc["measure"], "measure")
        except ValueError as exc:
            problems.append(str(exc))
    comparison = None
    if doc.get("comparison") is not None:
        try:
            comparison = measure_from_dict(doc["comparison"], "comparison")
        except ValueError as exc:
            problems.append(str(exc))
    if exp == "localize" and "comparison" not in doc:
        problems.append("localize needs a 'comparison' measure")

    quad = doc.get("quadrature") or {}
    segments, points = DEFAULT_SEGMENTS, DEFAULT_POINTS
    if not isinstance(quad, dict) or set(quad) - {"segments", "points_per_segment"}:
        problems.append("quadrature must be an object with keys segments, points_per_segment")
    else:
        segments = quad.get("segments", DEFAULT_SEGMENTS)
        points = quad.get("points_per_segment", DEFAULT_POINTS)
        if not (_is_int(segments) and segments >= 2):
            problems.append("quadrature.segments must be an integer >= 2")
        if not (_is_int(points) and points >= 1):
            problems.append("quadrature.points_per_segment must be a positive integer")

    out = doc.get("output") or {}
    out_dir, formats = None, ("csv", "json")
    if not isinstance(out, dict) or set(out) - {"dir", "formats"}:
        problems.append("output must be an object with keys dir, formats")
    else:
        out_dir = out.get("dir")
        if out_dir is not None and not isinstance(out_dir, str):
            problems.append("output.dir must be a string path")
        formats = tuple(out.get("formats", ["csv", "json"]))
        if not formats or set(formats) - {"csv", "json"}:
            problems.append("output.formats must be a nonempty subset of ['csv', 'json']")

    params = {}
    if exp in EXPERIMENTS:
        given = doc.get("params") or {}
        if not isinstance(given, dict):
            problems.append("params must be an object")
            given = {}
        unknown = set(given) - set(PARAM_DEFAULTS[exp])
        if unknown:
            problems.append(f"params: unknown keys {sorted(unknown)} for experiment {exp!r}")
        params = json.loads(json.dumps(PARAM_DEFAULTS[exp]))
        params.update({k: v for k, v in given.items() if k in params})
        _validate_params(exp, params, problems, measure)
    if problems:
        raise ConfigError(problems)
    return RunConfig(exp, measure, comparison, segments, points, params, out_dir, formats)
