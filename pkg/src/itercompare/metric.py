"""Points, metrics, traces and the extended-real ratio.

Points are plain tuples of floats. Sequence data (error traces, bounds) is
held in read-only numpy arrays so whole-trace operations stay vectorised.
Extended reals are ordinary floats where ``math.inf`` is the only
non-finite value allowed; every quantity handled here is nonnegative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputError

Point = tuple  # tuple[float, ...]

METRICS = ("euclidean", "chebyshev", "absolute")

DEFAULT_FLOOR = 1e-300


def make_point(coords) -> Point:
    if isinstance(coords, (int, float)):
        coords = (coords,)
    pt = tuple(float(c) for c in coords)
    if not pt:
        raise InputError("point must have at least one coordinate")
    if not all(math.isfinite(c) for c in pt):
        raise InputError(f"point has non-finite coordinate: {pt}")
    return pt


def check_metric(kind: str, dimension: int) -> str:
    if kind not in METRICS:
        raise InputError(f"unknown metric {kind!r}; expected one of {METRICS}")
    if kind == "absolute" and dimension != 1:
        raise InputError("the absolute-value metric is only defined in dimension 1")
    return kind


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


def distance(p: Point, q: Point, metric: str = "euclidean") -> float:
    if len(p) != len(q):
        raise InputError(f"dimension mismatch: {len(p)} vs {len(q)}")
    check_metric(metric, len(p))
    if len(p) == 1:
        # all three metrics coincide with |p - q| on the line
        return abs(p[0] - q[0])
    if metric == "chebyshev":
        return max(abs(a - b) for a, b in zip(p, q))
    return math.hypot(*(a - b for a, b in zip(p, q)))


@dataclass(frozen=True)
class Trace:
    """Finite prefix of a sequence; ``points[k]`` is x_{start_index + k}."""

    points: np.ndarray  # shape (N, d)
    start_index: int = 1

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] == 0 or pts.shape[1] == 0:
            raise InputError("trace needs at least one point of dimension >= 1")
        if self.start_index < 1:
            raise InputError("start_index must be >= 1")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.start_index, self.start_index + len(self))


@dataclass(frozen=True)
class ErrorTrace:
    """Nonnegative distances d(x_n, x*) with the generating trace's indexing."""

    values: np.ndarray
    start_index: int = 1

    def __post_init__(self):
        vals = _frozen(self.values)
        if vals.ndim != 1 or vals.size == 0:
            raise InputError("error trace must be a nonempty 1-d sequence")
        if not np.all(np.isfinite(vals)) or np.any(vals < 0):
            raise InputError("error trace entries must be finite and >= 0")
        if self.start_index < 1:
            raise InputError("start_index must be >= 1")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return self.values.size

    @property
    def stop_index(self) -> int:
        """One past the last index."""
        return self.start_index + len(self)

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.start_index, self.stop_index)

    def window(self, start: int, stop: int) -> "ErrorTrace":
        lo = start - self.start_index
        return type(self)(self.values[lo:lo + stop - start], start)


def error_trace(trace: Trace, limit, metric: str = "euclidean") -> ErrorTrace:
    limit = make_point(limit)
    if len(limit) != trace.dimension:
        raise InputError(
            f"limit has dimension {len(limit)}, trace has {trace.dimension}")
    check_metric(metric, trace.dimension)
    diff = trace.points - np.asarray(limit)
    if trace.dimension == 1:
        vals = np.abs(diff[:, 0])
    elif metric == "chebyshev":
        vals = np.max(np.abs(diff), axis=1)
    else:
        vals = np.hypot.reduce(diff, axis=1)
    return ErrorTrace(vals, trace.start_index)


def xratio(num: float, den: float) -> float:
    """num/den with 0/0 := 1 and a/0 := inf for a > 0."""
    if num < 0 or den < 0 or math.isnan(num) or math.isnan(den):
        raise InputError(f"xratio needs nonnegative arguments, got {num}, {den}")
    if den == 0:
        return 1.0 if num == 0 else math.inf
    return num / den


def xratio_array(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    """Vectorised :func:`xratio`; never produces NaN."""
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    out = np.empty(np.broadcast(num, den).shape)
    zero = den == 0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        np.divide(num, den, out=out, where=~zero)
    out[zero & (num == 0)] = 1.0
    out[zero & (num != 0)] = math.inf
    return out


def align(e1: ErrorTrace, e2: ErrorTrace) -> tuple[ErrorTrace, ErrorTrace]:
    """Restrict both traces to their common index range."""
    start = max(e1.start_index, e2.start_index)
    stop = min(e1.stop_index, e2.stop_index)
    if stop <= start:
        raise InputError(
            f"traces do not overlap: [{e1.start_index}, {e1.stop_index}) vs "
            f"[{e2.start_index}, {e2.stop_index})")
    return e1.window(start, stop), e2.window(start, stop)


def ratio_trace(e1: ErrorTrace, e2: ErrorTrace) -> np.ndarray:
    """Pointwise extended ratio over the overlap of the two traces."""
    a, b = align(e1, e2)
    return xratio_array(a.values, b.values)


def underflow_cut(*values: Sequence[float], floor: float = DEFAULT_FLOOR) -> int:
    """Length of the prefix that is free of underflow.

    Returns the first position (counting from 1 so at least one entry always
    survives) where any sequence holds a value in (0, floor); exact zeros are
    legitimate and do not trigger a cut.
    """
    n = min(len(v) for v in values)
    cut = n
    for v in values:
        arr = np.asarray(v[:n], dtype=float)
        bad = np.nonzero((arr > 0) & (arr < floor))[0]
        bad = bad[bad >= 1]
        if bad.size:
            cut = min(cut, int(bad[0]))
    return cut
