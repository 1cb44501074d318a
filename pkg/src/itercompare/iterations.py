"""Picard, Krasnoselskij, Mann and Ishikawa iterations over parsed operators."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import EvaluationError, GenerationError, InputError
from .expr import Expr, affine_coefficients, parse_expr
from .metric import Point, Trace, check_metric, distance, make_point

SCHEMES = ("picard", "krasnoselskij", "mann", "ishikawa")
DEFAULT_FP_TOL = 1e-9


@dataclass(frozen=True)
class OperatorSpec:
    exprs: tuple[Expr, ...]

    @classmethod
    def parse(cls, sources: str | Sequence[str]) -> "OperatorSpec":
        if isinstance(sources, str):
            sources = [sources]
        d = len(sources)
        if not 1 <= d <= 9:
            raise InputError(f"operator dimension must be in 1..9, got {d}")
        names = [f"x{i}" for i in range(1, d + 1)]
        return cls(tuple(parse_expr(s, names) for s in sources))

    @property
    def dimension(self) -> int:
        return len(self.exprs)

    @property
    def sources(self) -> list[str]:
        return [e.source for e in self.exprs]


def apply_operator(op: OperatorSpec, p: Point) -> Point:
    if len(p) != op.dimension:
        raise InputError(f"point has dimension {len(p)}, operator has {op.dimension}")
    env = {f"x{i}": v for i, v in enumerate(p, start=1)}
    out = []
    for i, expr in enumerate(op.exprs, start=1):
        try:
            out.append(expr(env))
        except EvaluationError as exc:
            raise EvaluationError(f"coordinate {i}: {exc}") from None
    return tuple(out)


@dataclass(frozen=True)
class ScheduleSpec:
    """Coefficient sequence given as an expression in the index ``n``."""

    expr: Expr

    @classmethod
    def parse(cls, src: str | float) -> "ScheduleSpec":
        return cls(parse_expr(str(src) if not isinstance(src, str) else src, ["n"]))

    def __call__(self, n: int) -> float:
        return self.expr(n=float(n))


@dataclass(frozen=True)
class SchemeSpec:
    kind: str
    lam: float | None = None
    alpha: ScheduleSpec | None = None
    beta: ScheduleSpec | None = None

    def __post_init__(self):
        if self.kind not in SCHEMES:
            raise InputError(f"unknown scheme {self.kind!r}; expected one of {SCHEMES}")
        if self.kind == "krasnoselskij":
            if self.lam is None or not 0 < self.lam < 1:
                raise InputError(f"krasnoselskij needs lambda strictly inside (0,1), got {self.lam}")
        if self.kind in ("mann", "ishikawa") and self.alpha is None:
            raise InputError(f"{self.kind} needs an alpha schedule")
        if self.kind == "ishikawa" and self.beta is None:
            raise InputError("ishikawa needs a beta schedule")

    @classmethod
    def picard(cls):
        return cls("picard")

    @classmethod
    def krasnoselskij(cls, lam: float):
        return cls("krasnoselskij", lam=float(lam))

    @classmethod
    def mann(cls, alpha):
        return cls("mann", alpha=ScheduleSpec.parse(alpha))

    @classmethod
    def ishikawa(cls, alpha, beta):
        return cls("ishikawa", alpha=ScheduleSpec.parse(alpha), beta=ScheduleSpec.parse(beta))

    def describe(self) -> str:
        if self.kind == "krasnoselskij":
            return f"krasnoselskij(lambda={self.lam!r})"
        if self.kind == "mann":
            return f"mann(alpha={self.alpha.expr.source})"
        if self.kind == "ishikawa":
            return f"ishikawa(alpha={self.alpha.expr.source}, beta={self.beta.expr.source})"
        return self.kind


def closed_form_fixed_point(op: OperatorSpec) -> Point | None:
    """Fixed point of a 1-d affine contraction c*x + b, else None."""
    if op.dimension != 1:
        return None
    coeffs = affine_coefficients(op.exprs[0], "x1")
    if coeffs is None:
        return None
    c, b = coeffs
    if not abs(c) < 1:
        return None
    return (b / (1 - c),)


@dataclass(frozen=True)
class Scenario:
    operator: OperatorSpec
    scheme: SchemeSpec
    x0: Point
    fixed_point: Point
    horizon: int
    metric: str = "euclidean"
    fp_tol: float = DEFAULT_FP_TOL

    def __post_init__(self):
        object.__setattr__(self, "x0", make_point(self.x0))
        object.__setattr__(self, "fixed_point", make_point(self.fixed_point))
        d = self.operator.dimension
        if len(self.x0) != d or len(self.fixed_point) != d:
            raise InputError(f"x0 and fixed_point must have operator dimension {d}")
        if self.horizon < 1:
            raise InputError("horizon must be >= 1")
        check_metric(self.metric, d)
        residual = distance(apply_operator(self.operator, self.fixed_point),
                            self.fixed_point, self.metric)
        if not residual <= self.fp_tol:
            raise InputError(
                f"fixed_point {self.fixed_point} has residual {residual:.3g} "
                f"> fp_tol {self.fp_tol:g}")

    @property
    def limit(self) -> Point:
        return self.fixed_point

    def describe(self) -> str:
        return f"{self.scheme.describe()} on T = ({', '.join(self.operator.sources)})"


def _combine(w: float, x: Point, y: Point) -> Point:
    """(1 - w) x + w y, coordinatewise."""
    return tuple((1 - w) * a + w * b for a, b in zip(x, y))


def _coefficient(schedule: ScheduleSpec, n: int, name: str) -> float:
    try:
        value = schedule(n)
    except EvaluationError as exc:
        raise GenerationError(f"{name} schedule failed at n={n}: {exc}") from None
    if not 0 <= value <= 1:
        raise GenerationError(f"{name}_n = {value!r} outside [0, 1] at n={n}")
    return value


def generate(s: Scenario) -> Trace:
    """Run the scheme from x_1 = x0 for ``horizon`` steps (horizon+1 points)."""
    op, scheme = s.operator, s.scheme
    T = lambda p: apply_operator(op, p)  # noqa: E731
    x = s.x0
    points = [x]
    for n in range(1, s.horizon + 1):
        try:
            if scheme.kind == "picard":
                x = T(x)
            elif scheme.kind == "krasnoselskij":
                x = _combine(scheme.lam, x, T(x))
            elif scheme.kind == "mann":
                a = _coefficient(scheme.alpha, n, "alpha")
                x = _combine(a, x, T(x))
            else:
                a = _coefficient(scheme.alpha, n, "alpha")
                b = _coefficient(scheme.beta, n, "beta")
                y = _combine(b, x, T(x))
                x = _combine(a, x, T(y))
        except EvaluationError as exc:
            raise GenerationError(f"operator evaluation failed at n={n}: {exc}") from None
        if not all(math.isfinite(c) for c in x):
            raise GenerationError(f"iterate x_{n + 1} is not finite: {x}")
        points.append(x)
    return Trace(np.array(points), start_index=1)


@dataclass(frozen=True)
class SequenceScenario:
    """Explicitly given sequence x_n = (f_1(n), ..., f_d(n)) with known limit.

    Used for sequences that are not produced by an iteration scheme, such as
    interleaved test pairs. ``horizon`` matches :class:`Scenario`: the trace
    holds indices 1..horizon+1.
    """

    terms: tuple[Expr, ...]
    limit: Point
    horizon: int
    metric: str = "euclidean"
    fixed_point: Point | None = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "limit", make_point(self.limit))
        object.__setattr__(self, "fixed_point", self.limit)
        if len(self.limit) != len(self.terms):
            raise InputError("limit dimension must match the number of terms")
        if self.horizon < 1:
            raise InputError("horizon must be >= 1")
        check_metric(self.metric, len(self.terms))

    @classmethod
    def parse(cls, sources, limit, horizon, metric="euclidean"):
        if isinstance(sources, str):
            sources = [sources]
        return cls(tuple(parse_expr(s, ["n"]) for s in sources), limit, horizon, metric)

    def describe(self) -> str:
        return f"sequence ({', '.join(t.source for t in self.terms)})"


def generate_sequence(s: SequenceScenario) -> Trace:
    rows = []
    for n in range(1, s.horizon + 2):
        try:
            rows.append([t(n=float(n)) for t in s.terms])
        except EvaluationError as exc:
            raise GenerationError(f"sequence term failed at n={n}: {exc}") from None
    return Trace(np.array(rows), start_index=1)


def trace_of(s: Scenario | SequenceScenario) -> Trace:
    return generate_sequence(s) if isinstance(s, SequenceScenario) else generate(s)
