import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from itercompare.adversary import synthesize_prop1
from itercompare.comparators import (BoundTrace, EstimatorConfig, compare_berinde_def25,
                                     compare_berinde_def27, compare_popescu, compare_rhoades,
                                     compare_zalinescu, tail_estimate, validate_bounds,
                                     vanishes)
from itercompare.errors import BoundViolationError, InputError
from itercompare.metric import ErrorTrace

from conftest import example1_errors

N = np.arange(1, 1001, dtype=float)


# -- tail estimates -------------------------------------------------------------------

def test_tail_limsup_of_alternating_ratio():
    seq = np.tile([2.0, 0.5], 500)
    est = tail_estimate(seq, "limsup", window_frac=0.2)
    assert est.value == 2 and est.conclusive
    assert est.window_len == 200 and est.window_start == 801
    assert tail_estimate(seq, "liminf", 0.2).value == 0.5


def test_tail_limit_of_constant():
    est = tail_estimate(np.ones(50), "limit")
    assert est.value == 1 and est.oscillation == 0 and est.conclusive


def test_tail_infinite_entry_dominates():
    assert tail_estimate([1.0, math.inf], "limsup", window_frac=1).value == math.inf
    lim = tail_estimate([1.0, math.inf], "limit", window_frac=1)
    assert not lim.conclusive


def test_tail_limit_oscillating_is_inconclusive():
    est = tail_estimate(np.tile([2.0, 0.5], 500), "limit")
    assert not est.conclusive and est.oscillation == 1.5


def test_window_is_ceiling_of_fraction():
    assert tail_estimate(np.ones(61), "limsup", 0.2).window_len == 13
    assert tail_estimate([5.0], "limit", 0.2).window_len == 1


def test_envelope_trend_reads_power_laws():
    assert tail_estimate(N ** -0.5, "limsup").trend == pytest.approx(-0.5, abs=1e-3)
    assert tail_estimate(N, "limsup").trend == pytest.approx(1.0, abs=1e-3)
    assert abs(tail_estimate(1 + 1 / N, "limsup").trend) < 1e-2


def test_slow_approach_to_a_positive_constant_does_not_vanish():
    assert not vanishes(tail_estimate(1 + 1 / N, "limsup"), 1e-6, 0.1)
    assert vanishes(tail_estimate(N ** -0.25, "limsup"), 1e-6, 0.1)


# -- faster / same rate on real sequences ---------------------------------------------

def test_def25_examples():
    assert compare_berinde_def25(1 / N ** 2, 1 / N).relation == "left_faster"
    v = compare_berinde_def25(2 / N, 1 / N)
    assert v.relation == "same_rate" and v.stats["l"] == 2
    assert compare_berinde_def25(1 / N, 1 / N ** 2).relation == "right_faster"


def test_def25_nonzero_limits():
    v = compare_berinde_def25(3 + 1 / N ** 2, -1 - 1 / N, 3, -1)
    assert v.relation == "left_faster"


def test_def25_length_mismatch():
    with pytest.raises(InputError):
        compare_berinde_def25([1.0, 2.0], [1.0])


def test_def25_infinite_window_is_right_faster():
    v = compare_berinde_def25(1 / N, np.zeros_like(N))
    assert v.relation == "right_faster"


_flip = {"left_faster": "right_faster", "right_faster": "left_faster"}

sequences = st.lists(st.floats(0, 1e3, allow_nan=False), min_size=5, max_size=60)


@given(sequences, sequences)
@settings(max_examples=200)
def test_def25_antisymmetry_random(a, b):
    m = min(len(a), len(b))
    a, b = a[:m], b[:m]
    v1 = compare_berinde_def25(a, b).relation
    v2 = compare_berinde_def25(b, a).relation
    if v1 != "inconclusive":
        assert v2 == _flip.get(v1, v1)


@pytest.mark.parametrize("p, q", [(1, 2), (0.5, 0.5), (2, 1), (3, 0.7)])
def test_def25_antisymmetry_families(p, q):
    a, b = 1 / N ** p, 3 / N ** q
    v1 = compare_berinde_def25(a, b).relation
    assert v1 != "inconclusive"
    assert compare_berinde_def25(b, a).relation == _flip.get(v1, v1)


def test_conclusive_verdicts_cite_conclusive_estimates():
    for a, b in [(1 / N ** 2, 1 / N), (2 / N, 1 / N), (1 / N, 1 / N ** 2)]:
        v = compare_berinde_def25(a, b)
        assert v.relation != "inconclusive"
        assert all(e.conclusive for e in v.evidence)


# -- bound validation -----------------------------------------------------------------

def test_validate_bounds_examples():
    e = ErrorTrace([0.5, 0.25])
    assert validate_bounds(e, BoundTrace([1.0, 0.5]))
    bad = validate_bounds(e, BoundTrace([0.4, 0.5]))
    assert not bad and bad.index == 1 and bad.condition == "domination"
    bad = validate_bounds(e, BoundTrace([1.0, 0.0]))
    assert not bad and bad.index == 2 and bad.condition == "positivity"


def test_validate_bounds_reports_vanishing():
    e = ErrorTrace(1 / N)
    assert validate_bounds(e, BoundTrace(2 / N)).vanishing
    constant = validate_bounds(e, BoundTrace(np.full_like(N, 2.0)))
    assert constant.ok and not constant.vanishing


# -- bound-mediated comparison --------------------------------------------------------

def test_def27_examples():
    e = ErrorTrace(1 / N)
    a, b = synthesize_prop1(e, e)
    assert compare_berinde_def27(e, e, a, b).relation == "left_faster"
    assert compare_berinde_def27(e, e, b, a).relation == "right_faster"
    shared = BoundTrace(2 / N)
    v = compare_berinde_def27(e, e, shared, shared)
    assert v.relation == "same_rate" and v.stats["l"] == 1
    assert "bound-mediated" in v.notes


def test_def27_rejects_invalid_bounds():
    e = ErrorTrace(1 / N)
    with pytest.raises(BoundViolationError) as info:
        compare_berinde_def27(e, e, BoundTrace(0.5 / N), BoundTrace(2 / N))
    assert info.value.check.condition == "domination"


def test_def27_vanishing_requirement_can_be_relaxed():
    e = ErrorTrace(1 / N)
    const = BoundTrace(np.full_like(N, 5.0))
    with pytest.raises(BoundViolationError, match="does not tend to 0"):
        compare_berinde_def27(e, e, const, BoundTrace(2 / N))
    relaxed = EstimatorConfig(require_vanishing=False)
    assert compare_berinde_def27(e, e, const, BoundTrace(2 / N), relaxed).relation == "right_faster"


def test_def27_depends_only_on_the_bounds():
    b1, b2 = BoundTrace(1 / N), BoundTrace(1 / np.sqrt(N))
    rng = np.random.default_rng(3)
    verdicts = set()
    for _ in range(5):
        e1 = ErrorTrace(b1.values * rng.uniform(0, 1, N.size))
        e2 = ErrorTrace(b2.values * rng.uniform(0, 1, N.size))
        v = compare_berinde_def27(e1, e2, b1, b2)
        verdicts.add((v.relation, v.stats["l"]))
    assert verdicts == {("left_faster", 0.0)}


# -- direct comparison ----------------------------------------------------------------

def test_popescu_examples():
    n = np.arange(1, 61, dtype=float)
    assert compare_popescu(ErrorTrace(0.5 ** n), ErrorTrace(0.75 ** n)).relation == "left_faster"
    e = ErrorTrace(1 / n)
    v = compare_popescu(e, e)
    assert v.relation == "same_rate" and v.stats["l"] == 1
    x, y = example1_errors(1000)
    assert compare_popescu(x, y).relation == "inconclusive"


@given(st.lists(st.floats(0, 1e200), min_size=1, max_size=80))
def test_popescu_self_comparison(vals):
    e = ErrorTrace(vals)
    v = compare_popescu(e, e)
    assert v.relation == "same_rate" and v.stats["l"] == 1


def test_popescu_truncates_underflow():
    n = np.arange(1, 2001, dtype=float)
    v = compare_popescu(ErrorTrace(0.5 ** n), ErrorTrace(0.6 ** n))
    assert v.relation == "left_faster"
    assert v.truncated_at is not None and v.truncated_at < 1000


# -- pointwise domination -------------------------------------------------------------

def test_rhoades_examples():
    assert compare_rhoades(ErrorTrace(1 / (2 * N)), ErrorTrace(1 / N)).relation == "left_better"
    x, y = example1_errors(100)
    assert compare_rhoades(x, y).relation == "neither"
    assert compare_rhoades(x, x).relation == "same_rate"
    assert compare_rhoades(ErrorTrace(1 / N), ErrorTrace(1 / (2 * N))).relation == "right_better"


@given(sequences, sequences)
def test_rhoades_both_ways_means_equal(a, b):
    m = min(len(a), len(b))
    e1, e2 = ErrorTrace(a[:m]), ErrorTrace(b[:m])
    both = (compare_rhoades(e1, e2).relation in ("left_better", "same_rate")
            and compare_rhoades(e2, e1).relation in ("left_better", "same_rate"))
    assert both == np.array_equal(e1.values, e2.values)


# -- limsup test ----------------------------------------------------------------------

def test_zalinescu_examples():
    x, y = example1_errors(10_000)
    v = compare_zalinescu(x, y)
    assert v.relation == "same_rate"
    assert v.stats["liminf"] == 0.5 and v.stats["limsup"] == 2.0
    v = compare_zalinescu(ErrorTrace(1 / N ** 2), ErrorTrace(1 / N))
    assert v.relation == "left_better" and v.stats["limsup"] < 1e-2
    zeros = ErrorTrace(np.where(N % 3 == 0, 0.0, 1 / N))
    assert compare_zalinescu(zeros, zeros).relation == "same_rate"


def test_zalinescu_neither_when_both_unbounded():
    odd = N % 2 == 1
    x = ErrorTrace(np.where(odd, 1 / N, 1 / N ** 3))
    y = ErrorTrace(np.where(odd, 1 / N ** 3, 1 / N))
    assert compare_zalinescu(x, y).relation == "neither"


def test_zalinescu_infinite_ratio_in_tail():
    y = ErrorTrace(np.where(N % 2 == 0, 0.0, 1 / N))
    assert compare_zalinescu(ErrorTrace(1 / N), y).relation == "right_better"


def test_zalinescu_alpha_witness_holds_in_the_window():
    x, y = example1_errors(1000)
    v = compare_zalinescu(x, y)
    sup = v.evidence[0]
    lo = sup.window_start - 1
    assert np.all(x.values[lo:] <= v.stats["alpha"] * y.values[lo:])


def _family_pairs():
    n = np.arange(1, 5001, dtype=float)
    odd = n % 2 == 1
    return [
        (1 / n, 2 / n),
        (1 / n ** 2, 1 / n),
        (0.9 ** n, 1 / n),
        (np.where(odd, 1 / n, 1 / (2 * n)), np.where(odd, 1 / (2 * n), 1 / n)),
        (np.where(odd, 1 / n, 1 / n ** 2), np.where(odd, 1 / n ** 2, 1 / n)),
        (1 / n ** 0.5, 1 / n ** 1.5),
    ]


@pytest.mark.parametrize("a, b", _family_pairs())
def test_zalinescu_same_rate_iff_both_directions(a, b):
    e1, e2 = ErrorTrace(a), ErrorTrace(b)
    v = compare_zalinescu(e1, e2).relation
    fwd = v in ("left_better", "same_rate")
    rev = compare_zalinescu(e2, e1).relation in ("left_better", "same_rate")
    assert (v == "same_rate") == (fwd and rev)


@given(sequences, sequences)
@settings(max_examples=200)
def test_zalinescu_same_rate_iff_both_directions_random(a, b):
    m = min(len(a), len(b))
    e1, e2 = ErrorTrace(a[:m]), ErrorTrace(b[:m])
    v = compare_zalinescu(e1, e2).relation
    w = compare_zalinescu(e2, e1).relation
    mirror = {"left_better": "right_better", "right_better": "left_better"}
    assert w == mirror.get(v, v)


@pytest.mark.parametrize("a, b", _family_pairs())
@pytest.mark.parametrize("c", [1e-6, 1.0, 1e6])
def test_zalinescu_scale_robust(a, b, c):
    base = compare_zalinescu(ErrorTrace(a), ErrorTrace(b)).relation
    scaled = compare_zalinescu(ErrorTrace(c * a), ErrorTrace(b)).relation
    assert (base in ("left_better", "same_rate")) == (scaled in ("left_better", "same_rate"))
