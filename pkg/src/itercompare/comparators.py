"""Rate-of-convergence comparisons on finite error traces.

Asymptotic quantities (lim, limsup, liminf) are replaced by statistics of a
tail window. A sequence is judged to tend to 0 when its tail maximum is
below a tolerance or when the upper envelope of the tail decays like a
power law n^-p with p at least ``decay_exponent``; growth to infinity is
judged symmetrically on the reciprocal ratio. Anything else that lacks a
settled limit is reported as ``inconclusive``.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .errors import BoundViolationError, InputError
from .metric import DEFAULT_FLOOR, ErrorTrace, align, underflow_cut, xratio_array

RELATIONS = ("left_faster", "right_faster", "left_better", "right_better",
             "same_rate", "neither", "inconclusive")
KINDS = ("limit", "limsup", "liminf")


@dataclass(frozen=True)
class EstimatorConfig:
    window_frac: float = 0.2
    limit_tol: float = 1e-6
    floor: float = DEFAULT_FLOOR
    zero_tol: float = 1e-6
    decay_exponent: float = 0.1
    blocks: int = 10
    alpha_slack: float = 1e-9
    require_vanishing: bool = True

    def __post_init__(self):
        if not 0 < self.window_frac <= 1:
            raise InputError(f"window_frac must lie in (0, 1], got {self.window_frac}")
        if not self.limit_tol > 0:
            raise InputError("limit_tol must be > 0")
        if self.floor < 0 or self.zero_tol < 0 or self.decay_exponent <= 0:
            raise InputError("floor, zero_tol must be >= 0 and decay_exponent > 0")
        if self.blocks < 2:
            raise InputError("blocks must be >= 2")

    def replace(self, **changes) -> "EstimatorConfig":
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


DEFAULT_CONFIG = EstimatorConfig()


@dataclass(frozen=True)
class TailEstimate:
    kind: str
    value: float
    window_start: int
    window_len: int
    oscillation: float
    conclusive: bool
    # log-log slope of the tail envelope (upper for limit/limsup, lower for liminf)
    trend: float | None = None

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "value": self.value,
            "window_start": self.window_start,
            "window_len": self.window_len,
            "oscillation": self.oscillation,
            "conclusive": self.conclusive,
            "trend": self.trend,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TailEstimate":
        return cls(**d)


def envelope_slope(window: np.ndarray, indices: np.ndarray, upper: bool = True,
                   blocks: int = 10) -> float | None:
    """Least-squares slope of log(block extremum) against log(its index)."""
    nblocks = min(blocks, window.size)
    if nblocks < 2:
        return None
    xs, ys = [], []
    for vals, idx in zip(np.array_split(window, nblocks), np.array_split(indices, nblocks)):
        k = int(np.argmax(vals) if upper else np.argmin(vals))
        ext = vals[k]
        if not (math.isfinite(ext) and ext > 0):
            return None
        xs.append(math.log(float(idx[k])))
        ys.append(math.log(float(ext)))
    if xs[0] == xs[-1]:
        return None
    return statistics.linear_regression(xs, ys).slope


def tail_estimate(seq: Sequence[float], kind: str, window_frac: float = 0.2,
                  limit_tol: float = 1e-6, start_index: int = 1,
                  blocks: int = 10) -> TailEstimate:
    if kind not in KINDS:
        raise InputError(f"unknown estimate kind {kind!r}")
    arr = np.asarray(seq, dtype=float)
    if arr.size == 0:
        raise InputError("tail_estimate needs a nonempty sequence")
    w = max(1, math.ceil(window_frac * arr.size))
    window = arr[-w:]
    first = start_index + arr.size - w
    indices = np.arange(first, first + w)
    infinite = np.isinf(window)
    finite = window[~infinite]
    osc = float(finite.max() - finite.min()) if finite.size else 0.0

    if kind == "limsup":
        value = math.inf if infinite.any() else float(window.max())
        conclusive = True
        trend = envelope_slope(window, indices, True, blocks)
    elif kind == "liminf":
        value = float(window.min())
        conclusive = True
        trend = envelope_slope(window, indices, False, blocks)
    else:
        if finite.size:
            value = 0.5 * (float(finite.max()) + float(finite.min()))
        else:
            value = math.inf
        conclusive = bool(not infinite.any() and osc <= limit_tol)
        trend = envelope_slope(window, indices, True, blocks)
    return TailEstimate(kind, value, first, w, osc, conclusive, trend)


def vanishes(sup: TailEstimate, tol: float, decay_exponent: float) -> bool:
    """Whether a limsup estimate supports "the sequence tends to 0"."""
    if not math.isfinite(sup.value):
        return False
    if sup.value <= tol:
        return True
    return sup.trend is not None and sup.trend <= -decay_exponent


def unbounded(sup: TailEstimate, decay_exponent: float) -> bool:
    """Whether a limsup estimate supports "limsup = +inf" (scale free)."""
    if math.isinf(sup.value):
        return True
    return sup.trend is not None and sup.trend >= decay_exponent


@dataclass(frozen=True)
class Verdict:
    relation: str
    comparator: str
    evidence: list = field(default_factory=list)
    notes: str = ""
    stats: dict = field(default_factory=dict)
    truncated_at: int | None = None

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise InputError(f"unknown relation {self.relation!r}")

    @property
    def conclusive(self) -> bool:
        return self.relation != "inconclusive"


def _truncate(num: np.ndarray, den: np.ndarray, floor: float, start_index: int):
    cut = underflow_cut(num, den, floor=floor)
    if cut < num.size:
        return num[:cut], den[:cut], start_index + cut
    return num, den, None


def _same_rate_value(est: TailEstimate, tol: float) -> bool:
    return est.conclusive and tol < est.value < 1 / tol


def _ratio_limit_verdict(num, den, cfg: EstimatorConfig, comparator: str,
                         start_index: int = 1, notes: str = "") -> Verdict:
    """Limit test on |num_n| / |den_n| as used by the faster/same-rate comparisons."""
    num, den, truncated_at = _truncate(np.asarray(num, float), np.asarray(den, float),
                                       cfg.floor, start_index)
    fwd = xratio_array(num, den)
    rev = xratio_array(den, num)
    est = dict(window_frac=cfg.window_frac, limit_tol=cfg.limit_tol,
               start_index=start_index, blocks=cfg.blocks)
    fwd_sup = tail_estimate(fwd, "limsup", **est)
    rev_sup = tail_estimate(rev, "limsup", **est)
    fwd_lim = tail_estimate(fwd, "limit", **est)
    rev_lim = tail_estimate(rev, "limit", **est)
    tol, k = cfg.limit_tol, cfg.decay_exponent
    left = vanishes(fwd_sup, tol, k)
    right = vanishes(rev_sup, tol, k)

    if left and not right:
        relation, evidence, stats = "left_faster", [fwd_sup, rev_sup], {"l": 0.0}
    elif right and not left:
        relation, evidence, stats = "right_faster", [fwd_sup, rev_sup], {"l": math.inf}
    elif _same_rate_value(fwd_lim, tol):
        relation, evidence, stats = "same_rate", [fwd_sup, rev_sup, fwd_lim], {"l": fwd_lim.value}
    elif _same_rate_value(rev_lim, tol):
        relation, evidence, stats = "same_rate", [fwd_sup, rev_sup, rev_lim], {"l": 1 / rev_lim.value}
    else:
        relation, evidence, stats = "inconclusive", [fwd_sup, rev_sup, fwd_lim, rev_lim], {}
        notes = (notes + "; " if notes else "") + "ratio has no settled tail limit"
    stats["ratio_tail_max"] = fwd_sup.value
    stats["ratio_tail_min"] = float(np.min(fwd[-fwd_sup.window_len:]))
    return Verdict(relation, comparator, evidence, notes, stats, truncated_at)


def compare_berinde_def25(a: Sequence[float], b: Sequence[float], la: float = 0.0,
                          lb: float = 0.0, cfg: EstimatorConfig = DEFAULT_CONFIG,
                          start_index: int = 1) -> Verdict:
    """Sequence comparison through l = lim |a_n - la| / |b_n - lb|."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size != b.size:
        raise InputError(f"length mismatch: {a.size} vs {b.size}")
    if a.size == 0:
        raise InputError("sequences must be nonempty")
    if not (math.isfinite(la) and math.isfinite(lb)):
        raise InputError("claimed limits must be finite")
    return _ratio_limit_verdict(np.abs(a - la), np.abs(b - lb), cfg, "berinde25", start_index)


@dataclass(frozen=True)
class BoundTrace:
    """Candidate upper bounds a_n for an error sequence, plus where they came from."""

    values: np.ndarray
    start_index: int = 1
    source: str = "user-supplied"

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.ndim != 1 or vals.size == 0 or not np.all(np.isfinite(vals)):
            raise InputError("bound trace must be a nonempty finite 1-d sequence")
        if self.start_index < 1:
            raise InputError("start_index must be >= 1")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return self.values.size

    @property
    def stop_index(self) -> int:
        return self.start_index + self.values.size

    def window(self, start: int, stop: int) -> "BoundTrace":
        lo = start - self.start_index
        return BoundTrace(self.values[lo:lo + stop - start], start, self.source)


@dataclass(frozen=True)
class BoundCheck:
    """Outcome of :func:`validate_bounds`; truthy when the bound is certified."""

    ok: bool
    index: int | None = None
    condition: str | None = None
    tail_max: float = math.nan
    vanishing: bool = False
    source: str = ""

    def __bool__(self):
        return self.ok

    def describe(self) -> str:
        if self.ok:
            tail = "vanishing" if self.vanishing else "NOT vanishing"
            return f"bound {self.source!r} certified (tail max {self.tail_max:.3g}, {tail})"
        return f"bound {self.source!r} violates {self.condition} at n={self.index}"


def validate_bounds(e: ErrorTrace, bound: BoundTrace, zero_tol: float = 1e-6,
                    cfg: EstimatorConfig = DEFAULT_CONFIG) -> BoundCheck:
    """Certify positivity and pointwise domination of ``bound`` over ``e``."""
    ee, bb = align(e, bound)
    pos = bb.values > 0
    dom = bb.values >= ee.values
    bad_pos = np.nonzero(~pos)[0]
    bad_dom = np.nonzero(~dom)[0]
    first = min(bad_pos[0] if bad_pos.size else ee.values.size,
                bad_dom[0] if bad_dom.size else ee.values.size)
    tail = tail_estimate(bb.values, "limsup", cfg.window_frac, cfg.limit_tol,
                         bb.start_index, cfg.blocks)
    van = vanishes(tail, zero_tol, cfg.decay_exponent)
    if first < ee.values.size:
        condition = "positivity" if not pos[first] else "domination"
        return BoundCheck(False, bb.start_index + int(first), condition, tail.value, van,
                          bound.source)
    return BoundCheck(True, None, None, tail.value, van, bound.source)


def compare_berinde_def27(e1: ErrorTrace, e2: ErrorTrace, b1: BoundTrace, b2: BoundTrace,
                          cfg: EstimatorConfig = DEFAULT_CONFIG) -> Verdict:
    """Bound-mediated comparison: the faster/same-rate test applied to b1, b2."""
    for side, e, b in (("left", e1, b1), ("right", e2, b2)):
        check = validate_bounds(e, b, cfg.zero_tol, cfg)
        if not check:
            raise BoundViolationError(f"{side}: {check.describe()}", check)
        if cfg.require_vanishing and not check.vanishing:
            raise BoundViolationError(
                f"{side}: bound {b.source!r} does not tend to 0 "
                f"(tail max {check.tail_max:.3g}); relax with require_vanishing=False", check)
    x, y = align(b1, b2)
    notes = f"bound-mediated: a_n from {b1.source}, b_n from {b2.source}"
    verdict = _ratio_limit_verdict(x.values, y.values, cfg, "berinde27", x.start_index, notes)
    return verdict


def compare_popescu(e1: ErrorTrace, e2: ErrorTrace,
                    cfg: EstimatorConfig = DEFAULT_CONFIG) -> Verdict:
    """Faster/same-rate test applied to the true errors themselves."""
    a, b = align(e1, e2)
    return _ratio_limit_verdict(a.values, b.values, cfg, "popescu", a.start_index,
                                "direct comparison of d(x_n,x*) and d(y_n,y*)")


def compare_rhoades(e1: ErrorTrace, e2: ErrorTrace) -> Verdict:
    """Pointwise domination over the whole overlap."""
    a, b = align(e1, e2)
    le = a.values <= b.values
    ge = a.values >= b.values
    stats = {}
    if not le.all():
        stats["first_left_worse"] = int(a.start_index + np.argmin(le))
    if not ge.all():
        stats["first_right_worse"] = int(a.start_index + np.argmin(ge))
    if le.all() and ge.all():
        relation = "same_rate"
    elif le.all():
        relation = "left_better"
    elif ge.all():
        relation = "right_better"
    else:
        relation = "neither"
    return Verdict(relation, "rhoades", [], f"pointwise over n={a.start_index}..{a.stop_index - 1}",
                   stats)


def compare_zalinescu(e1: ErrorTrace, e2: ErrorTrace,
                      cfg: EstimatorConfig = DEFAULT_CONFIG) -> Verdict:
    """"Better" means a finite limsup of d(x_n,x)/d(y_n,y); same rate is both ways."""
    a, b = align(e1, e2)
    num, den, truncated_at = _truncate(a.values, b.values, cfg.floor, a.start_index)
    r = xratio_array(num, den)
    rr = xratio_array(den, num)
    est = dict(window_frac=cfg.window_frac, limit_tol=cfg.limit_tol,
               start_index=a.start_index, blocks=cfg.blocks)
    sup = tail_estimate(r, "limsup", **est)
    inf_ = tail_estimate(r, "liminf", **est)
    rsup = tail_estimate(rr, "limsup", **est)
    left = not unbounded(sup, cfg.decay_exponent)
    right = not unbounded(rsup, cfg.decay_exponent)
    stats = {"limsup": sup.value, "liminf": inf_.value}
    if left:
        stats["alpha"] = sup.value + cfg.alpha_slack
    if right:
        stats["alpha_reverse"] = rsup.value + cfg.alpha_slack
    relation = {(True, True): "same_rate", (True, False): "left_better",
                (False, True): "right_better", (False, False): "neither"}[(left, right)]
    return Verdict(relation, "zalinescu", [sup, inf_, rsup],
                   "limsup test on d(x_n,x)/d(y_n,y) with 0/0:=1, a/0:=inf",
                   stats, truncated_at)
