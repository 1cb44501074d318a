"""Bound sequences that make the bound-mediated comparison say anything.

For any two error traces e_x, e_y of sequences with a common limit,

    a_n = e_x[n] + e_y[n] + 1/n
    b_n = sqrt(a_n)            if a_n <= 1
          max(e_y[n], 1/n)     otherwise

are valid positive upper bounds for e_x and e_y that tend to 0, and
a_n / b_n = sqrt(a_n) -> 0 once a_n <= 1. Feeding them to the bound-mediated
test declares the x-sequence faster; swapping roles declares the opposite.
Taking a_n = b_n instead makes every pair "have the same rate".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .comparators import (DEFAULT_CONFIG, BoundCheck, BoundTrace, EstimatorConfig,
                          TailEstimate, Verdict, compare_berinde_def27, tail_estimate,
                          validate_bounds)
from .errors import InputError
from .metric import ErrorTrace, xratio_array


def _reindexed(e_x: ErrorTrace, e_y: ErrorTrace) -> tuple[np.ndarray, np.ndarray, int]:
    if len(e_x) != len(e_y) or e_x.start_index != e_y.start_index:
        raise InputError(
            f"misaligned traces: start {e_x.start_index}/{e_y.start_index}, "
            f"length {len(e_x)}/{len(e_y)}")
    return e_x.values, e_y.values, e_x.start_index - 1


def synthesize_prop1(e_x: ErrorTrace, e_y: ErrorTrace) -> tuple[BoundTrace, BoundTrace]:
    """Adversarial bounds (a for x, b for y) with a_n/b_n -> 0."""
    ex, ey, offset = _reindexed(e_x, e_y)
    n = np.arange(1, ex.size + 1, dtype=float)
    inv_n = 1.0 / n
    a = ex + ey + inv_n
    small = a <= 1
    b = np.where(small, np.sqrt(np.where(small, a, 1.0)), np.maximum(ey, inv_n))
    start = e_x.start_index
    return (BoundTrace(a, start, "prop1:a=e_x+e_y+1/n"),
            BoundTrace(b, start, "prop1:b=sqrt(a)|max(e_y,1/n)"))


def synthesize_equal_bounds(e_x: ErrorTrace, e_y: ErrorTrace) -> tuple[BoundTrace, BoundTrace]:
    ex, ey, _ = _reindexed(e_x, e_y)
    n = np.arange(1, ex.size + 1, dtype=float)
    a = BoundTrace(ex + ey + 1.0 / n, e_x.start_index, "equal:a=b=e_x+e_y+1/n")
    return a, a


@dataclass(frozen=True)
class SynthesisReport:
    direction: str  # "forward", "reverse" or "equal"
    bounds_for_x: BoundTrace
    bounds_for_y: BoundTrace
    validity_x: BoundCheck
    validity_y: BoundCheck
    berinde_verdict: Verdict
    ratio_tail: TailEstimate
    offset: int = 0
    warnings: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return bool(self.validity_x) and bool(self.validity_y)


def _convergence_warnings(e_x: ErrorTrace, e_y: ErrorTrace, cfg: EstimatorConfig) -> list:
    out = []
    for name, e in (("x", e_x), ("y", e_y)):
        if len(e) < 2:
            continue
        w = max(1, math.ceil(cfg.window_frac * len(e)))
        if e.values[-w:].max() > max(cfg.zero_tol, e.values[:-w].max(initial=0.0)):
            out.append(f"error trace of {name} does not decrease in the tail")
    return out


def _report(direction: str, e_x: ErrorTrace, e_y: ErrorTrace, bx: BoundTrace, by: BoundTrace,
            cfg: EstimatorConfig) -> SynthesisReport:
    vx = validate_bounds(e_x, bx, cfg.zero_tol, cfg)
    vy = validate_bounds(e_y, by, cfg.zero_tol, cfg)
    verdict = compare_berinde_def27(e_x, e_y, bx, by, cfg)
    ratio = xratio_array(bx.values, by.values)
    tail = tail_estimate(ratio, "limit", cfg.window_frac, cfg.limit_tol,
                         bx.start_index, cfg.blocks)
    warnings = _convergence_warnings(e_x, e_y, cfg)
    if direction != "equal":
        a = bx if direction == "forward" else by
        if not np.any(a.values[-tail.window_len:] <= 1):
            warnings.append("no tail index with a_n <= 1; horizon too short")
    return SynthesisReport(direction, bx, by, vx, vy, verdict, tail,
                           e_x.start_index - 1, warnings)


def demonstrate_inconsistency(e_x: ErrorTrace, e_y: ErrorTrace,
                              cfg: EstimatorConfig = DEFAULT_CONFIG
                              ) -> tuple[SynthesisReport, SynthesisReport]:
    """Run the construction both ways: x declared faster, then y declared faster."""
    a, b = synthesize_prop1(e_x, e_y)
    forward = _report("forward", e_x, e_y, a, b, cfg)
    a_rev, b_rev = synthesize_prop1(e_y, e_x)
    # roles swapped: a_rev bounds y, b_rev bounds x
    reverse = _report("reverse", e_x, e_y, b_rev, a_rev, cfg)
    return forward, reverse


def demonstrate_equal(e_x: ErrorTrace, e_y: ErrorTrace,
                      cfg: EstimatorConfig = DEFAULT_CONFIG) -> SynthesisReport:
    a, b = synthesize_equal_bounds(e_x, e_y)
    return _report("equal", e_x, e_y, a, b, cfg)
