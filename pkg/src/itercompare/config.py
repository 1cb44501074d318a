"""Experiment files: YAML documents describing two sequences and what to compare.

Schema (``schema_version: 1``)::

    schema_version: 1
    id: picard-vs-mann              # experiment id used in reports
    description: free text          # optional
    horizon: 60                     # >= 10; traces hold indices 1..horizon+1
    metric: absolute                # euclidean | chebyshev | absolute
    fp_tol: 1.0e-9                  # optional fixed-point residual tolerance
    comparators: [rhoades, berinde25, berinde27, popescu, zalinescu]
    bounds_mode: prop1-forward      # or a list; user-supplied | prop1-forward
                                    #   | prop1-reverse | equal
    estimator: {window_frac: 0.2, limit_tol: 1.0e-6, floor: 1.0e-300, zero_tol: 1.0e-6}
    left:                           # an iteration ...
      operator: ["x1/2"]            #   one expression per coordinate in x1..xd
      scheme: picard                #   or {kind: mann, alpha: "1/(n+1)"},
                                    #   {kind: krasnoselskij, lambda: 0.5},
                                    #   {kind: ishikawa, alpha: ..., beta: ...}
      x0: [1]
      fixed_point: [0]              #   optional for 1-d affine contractions
    right:                          # ... or an explicit sequence in n
      sequence: ["(3 + (-1)^n)/(4*n)"]
      limit: [0]
    bounds:                         # only for bounds_mode user-supplied
      left: {expr: "2/n"}           #   or {file: path}, one value per line from n=1
      right: {file: b.txt}
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
import yaml

from .comparators import BoundTrace, EstimatorConfig
from .errors import ConfigError, ItercompareError
from .expr import parse_expr
from .iterations import (DEFAULT_FP_TOL, OperatorSpec, Scenario, SchemeSpec,
                         SequenceScenario, closed_form_fixed_point)
from .metric import distance

SCHEMA_VERSION = 1
COMPARATORS = ("rhoades", "berinde25", "berinde27", "popescu", "zalinescu")
BOUNDS_MODES = ("user-supplied", "prop1-forward", "prop1-reverse", "equal")
MIN_HORIZON = 10

_TOP_KEYS = {"schema_version", "id", "description", "horizon", "metric", "fp_tol",
             "comparators", "bounds_mode", "estimator", "left", "right", "bounds"}
_ESTIMATOR_KEYS = {"window_frac", "limit_tol", "floor", "zero_tol", "decay_exponent",
                   "blocks", "alpha_slack", "require_vanishing"}


@dataclass(frozen=True)
class ExperimentConfig:
    id: str
    left: Scenario | SequenceScenario
    right: Scenario | SequenceScenario
    comparators: tuple[str, ...]
    bounds_modes: tuple[str, ...] = ()
    estimator: EstimatorConfig = field(default_factory=EstimatorConfig)
    horizon: int = 100
    metric: str = "euclidean"
    fp_tol: float = DEFAULT_FP_TOL
    description: str = ""
    user_bounds: tuple | None = None
    source: str = ""


def _num(value, where: str, integer: bool = False):
    # PyYAML reads "1e-9" as a string, so numeric strings are accepted
    if isinstance(value, bool):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{where}: expected a number, got {value!r}") from None
    if integer:
        if not out.is_integer():
            raise ConfigError(f"{where}: expected an integer, got {value!r}")
        return int(out)
    return out


def _point(value, where: str) -> tuple:
    if not isinstance(value, list):
        value = [value]
    pt = tuple(_num(v, f"{where}[{i}]") for i, v in enumerate(value))
    if not pt or not all(math.isfinite(c) for c in pt):
        raise ConfigError(f"{where}: expected a nonempty list of finite numbers")
    return pt


def _exprs(value, where: str) -> list[str]:
    if isinstance(value, (str, int, float)) and not isinstance(value, bool):
        value = [value]
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{where}: expected an expression or a list of expressions")
    return [str(v) for v in value]


def _scheme(raw, where: str) -> SchemeSpec:
    if isinstance(raw, str):
        raw = {"kind": raw}
    if not isinstance(raw, dict) or "kind" not in raw:
        raise ConfigError(f"{where}: expected a scheme name or a mapping with 'kind'")
    kind = raw["kind"]
    allowed = {"picard": {"kind"}, "krasnoselskij": {"kind", "lambda"},
               "mann": {"kind", "alpha"}, "ishikawa": {"kind", "alpha", "beta"}}
    if kind not in allowed:
        raise ConfigError(f"{where}.kind: unknown scheme {kind!r}")
    extra = set(raw) - allowed[kind]
    if extra:
        raise ConfigError(f"{where}: unexpected keys {sorted(extra)} for {kind}")
    missing = allowed[kind] - set(raw)
    if missing:
        raise ConfigError(f"{where}: {kind} needs {sorted(missing)}")
    try:
        if kind == "picard":
            return SchemeSpec.picard()
        if kind == "krasnoselskij":
            return SchemeSpec.krasnoselskij(_num(raw["lambda"], f"{where}.lambda"))
        if kind == "mann":
            return SchemeSpec.mann(str(raw["alpha"]))
        return SchemeSpec.ishikawa(str(raw["alpha"]), str(raw["beta"]))
    except ItercompareError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def _side(raw, where: str, horizon: int, metric: str, fp_tol: float):
    if not isinstance(raw, dict):
        raise ConfigError(f"{where}: expected a mapping")
    try:
        if "sequence" in raw:
            extra = set(raw) - {"sequence", "limit"}
            if extra:
                raise ConfigError(f"{where}: unexpected keys {sorted(extra)}")
            if "limit" not in raw:
                raise ConfigError(f"{where}: a sequence needs 'limit'")
            return SequenceScenario.parse(_exprs(raw["sequence"], f"{where}.sequence"),
                                          _point(raw["limit"], f"{where}.limit"),
                                          horizon, metric)
        extra = set(raw) - {"operator", "scheme", "x0", "fixed_point"}
        if extra:
            raise ConfigError(f"{where}: unexpected keys {sorted(extra)}")
        for key in ("operator", "scheme", "x0"):
            if key not in raw:
                raise ConfigError(f"{where}: missing {key!r}")
        try:
            op = OperatorSpec.parse(_exprs(raw["operator"], f"{where}.operator"))
        except ItercompareError as exc:
            raise ConfigError(f"{where}.operator: {exc}") from None
        scheme = _scheme(raw["scheme"], f"{where}.scheme")
        x0 = _point(raw["x0"], f"{where}.x0")
        if "fixed_point" in raw:
            fp = _point(raw["fixed_point"], f"{where}.fixed_point")
        else:
            fp = closed_form_fixed_point(op)
            if fp is None:
                raise ConfigError(f"{where}: fixed_point required (operator is not a "
                                  "1-d affine contraction)")
        return Scenario(op, scheme, x0, fp, horizon, metric, fp_tol)
    except ConfigError:
        raise
    except ItercompareError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def _read_bound(raw, where: str, base: Path, length: int, side: str) -> BoundTrace:
    if not isinstance(raw, dict) or len(raw) != 1 or not set(raw) <= {"expr", "file"}:
        raise ConfigError(f"{where}: expected {{expr: ...}} or {{file: ...}}")
    if "expr" in raw:
        try:
            e = parse_expr(str(raw["expr"]), ["n"])
            vals = [e(n=float(n)) for n in range(1, length + 1)]
        except ItercompareError as exc:
            raise ConfigError(f"{where}.expr: {exc}") from None
        return BoundTrace(vals, 1, f"user:{side}:{raw['expr']}")
    path = Path(raw["file"])
    if not path.is_absolute():
        path = base / path
    try:
        lines = [ln.strip() for ln in path.read_text().splitlines()]
    except OSError as exc:
        raise ConfigError(f"{where}.file: {exc}") from None
    vals = []
    for lineno, ln in enumerate(lines, start=1):
        if ln and not ln.startswith("#"):
            vals.append(_num(ln, f"{path}:{lineno}"))
    if not vals:
        raise ConfigError(f"{where}.file: {path} holds no values")
    return BoundTrace(np.array(vals), 1, f"user:{side}:{path.name}")


def parse_config(doc, source: str = "<config>", base: Path | None = None,
                 horizon: int | None = None) -> ExperimentConfig:
    """Validate an already-loaded YAML document."""
    base = base or Path(".")
    if not isinstance(doc, dict):
        raise ConfigError(f"{source}: top level must be a mapping")
    extra = set(doc) - _TOP_KEYS
    if extra:
        raise ConfigError(f"{source}: unknown keys {sorted(extra)}")
    version = doc.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"{source}: unsupported schema_version {version!r}")
    for key in ("id", "left", "right", "comparators"):
        if key not in doc:
            raise ConfigError(f"{source}: missing {key!r}")

    h = horizon if horizon is not None else _num(doc.get("horizon", 100), "horizon", True)
    if h < MIN_HORIZON:
        raise ConfigError(f"{source}: horizon must be >= {MIN_HORIZON}, got {h}")
    metric = str(doc.get("metric", "euclidean"))
    fp_tol = _num(doc.get("fp_tol", DEFAULT_FP_TOL), "fp_tol")

    comps = doc["comparators"]
    if isinstance(comps, str):
        comps = [comps]
    if not isinstance(comps, list) or not comps:
        raise ConfigError(f"{source}: comparators must be a nonempty list")
    bad = [c for c in comps if c not in COMPARATORS]
    if bad:
        raise ConfigError(f"{source}: unknown comparators {bad}; expected {COMPARATORS}")

    modes = doc.get("bounds_mode", [])
    if isinstance(modes, str):
        modes = [modes]
    bad = [m for m in modes if m not in BOUNDS_MODES]
    if bad:
        raise ConfigError(f"{source}: unknown bounds_mode {bad}; expected {BOUNDS_MODES}")
    if "berinde27" in comps and not modes:
        raise ConfigError(f"{source}: berinde27 needs a bounds_mode")

    est_raw = doc.get("estimator", {}) or {}
    if not isinstance(est_raw, dict) or set(est_raw) - _ESTIMATOR_KEYS:
        raise ConfigError(f"{source}: estimator keys must be among {sorted(_ESTIMATOR_KEYS)}")
    est_vals = {}
    for k, v in est_raw.items():
        if k == "require_vanishing":
            if not isinstance(v, bool):
                raise ConfigError(f"{source}: estimator.require_vanishing must be true/false")
            est_vals[k] = v
        else:
            est_vals[k] = _num(v, f"estimator.{k}", integer=(k == "blocks"))
    try:
        estimator = EstimatorConfig(**est_vals)
    except ItercompareError as exc:
        raise ConfigError(f"{source}: estimator: {exc}") from None

    left = _side(doc["left"], f"{source}: left", h, metric, fp_tol)
    right = _side(doc["right"], f"{source}: right", h, metric, fp_tol)
    if len(left.limit) != len(right.limit):
        raise ConfigError(f"{source}: left and right live in different dimensions")
    if "berinde27" in comps:
        gap = distance(left.limit, right.limit, metric)
        if gap > fp_tol:
            raise ConfigError(f"{source}: berinde27 needs a common limit; left and right "
                              f"limits differ by {gap:.3g} > fp_tol")

    user_bounds = None
    if "user-supplied" in modes:
        braw = doc.get("bounds")
        if not isinstance(braw, dict) or set(braw) != {"left", "right"}:
            raise ConfigError(f"{source}: bounds_mode user-supplied needs bounds.left "
                              "and bounds.right")
        user_bounds = (_read_bound(braw["left"], "bounds.left", base, h + 1, "left"),
                       _read_bound(braw["right"], "bounds.right", base, h + 1, "right"))
    elif "bounds" in doc:
        raise ConfigError(f"{source}: 'bounds' given but bounds_mode is not user-supplied")

    return ExperimentConfig(
        id=str(doc["id"]), left=left, right=right, comparators=tuple(comps),
        bounds_modes=tuple(modes), estimator=estimator, horizon=h, metric=metric,
        fp_tol=fp_tol, description=str(doc.get("description", "")),
        user_bounds=user_bounds, source=source)


def load_config(path, horizon: int | None = None) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: invalid YAML: {exc}") from None
    return parse_config(doc, str(path), path.parent, horizon)


def with_estimator(cfg: ExperimentConfig, **changes) -> ExperimentConfig:
    return replace(cfg, estimator=cfg.estimator.replace(**changes))
