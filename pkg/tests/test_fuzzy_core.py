import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fuzzysos.fuzzy_core import (
    DEADLINE_GAP,
    FUNDING_GAP,
    GAP_THRESHOLDS,
    GAP_VARIABLES,
    PERFORMANCE_GAP,
    WEIGHT,
    GapKind,
    GapTerm,
    LinguisticVariable,
    PiecewiseLinearMF,
    WeightTerm,
    classify_gap,
    classify_weight,
    eval_mf,
    fuzzify,
    gap_peaks,
)

from oracles import table1_bin

TRI = PiecewiseLinearMF.triangle(0, 1, 2)
ALL_VARS = [PERFORMANCE_GAP, FUNDING_GAP, DEADLINE_GAP, WEIGHT]


@pytest.mark.parametrize("x, expected", [(1, 1.0), (0.5, 0.5), (5, 0.0), (-3, 0.0), (1.5, 0.5)])
def test_eval_mf_triangle(x, expected):
    assert eval_mf(TRI, x) == pytest.approx(expected, abs=1e-15)


def test_mf_rejects_bad_breakpoints():
    with pytest.raises(ValueError):
        PiecewiseLinearMF(((0, 0),))
    with pytest.raises(ValueError):
        PiecewiseLinearMF(((0, 0), (0, 1)))
    with pytest.raises(ValueError):
        PiecewiseLinearMF(((0, 0), (1, 1.5)))


def test_duplicate_term_names_rejected():
    mf = PiecewiseLinearMF.triangle(0, 1, 2)
    with pytest.raises(ValueError):
        LinguisticVariable("v", 0, 2, (("a", mf), ("a", mf)))


def test_performance_gap_peaks_and_domain():
    assert gap_peaks(GapKind.PERFORMANCE) == (0.0, 1.0, 4.5, 8.0)
    assert (PERFORMANCE_GAP.lo, PERFORMANCE_GAP.hi) == (0.0, 9.0)
    assert (FUNDING_GAP.lo, FUNDING_GAP.hi) == (0.0, 9.0)
    assert (DEADLINE_GAP.lo, DEADLINE_GAP.hi) == (0.0, 99.0)


def test_fuzzify_examples():
    assert fuzzify(PERFORMANCE_GAP, 0).degrees == (1.0, 0.0, 0.0, 0.0)
    mv = fuzzify(PERFORMANCE_GAP, 5)
    # High = (8 - 5) / (8 - 4.5) = 6/7
    assert mv["none"] == 0 and mv["low"] == 0
    assert mv["high"] == pytest.approx(6 / 7, abs=1e-12)
    assert mv["extreme"] == pytest.approx(1 / 7, abs=1e-12)
    assert round(mv["high"], 3) == 0.857 and round(mv["extreme"], 3) == 0.143
    assert fuzzify(PERFORMANCE_GAP, 12).degrees == (0.0, 0.0, 0.0, 1.0)
    assert fuzzify(PERFORMANCE_GAP, -4).degrees == (1.0, 0.0, 0.0, 0.0)


@pytest.mark.parametrize("var", ALL_VARS, ids=lambda v: v.name)
def test_partition_of_unity_sweep(var):
    assert var.check_partition(samples=10_001) <= 1e-9


@pytest.mark.parametrize("var", ALL_VARS, ids=lambda v: v.name)
def test_single_full_term_at_domain_ends(var):
    for x in (var.lo, var.hi):
        assert sum(1 for d in fuzzify(var, x).degrees if d == 1.0) == 1


@pytest.mark.parametrize("kind", list(GapKind))
def test_peak_consistency(kind):
    t1, t2, gmax = GAP_THRESHOLDS[kind]
    points = [0.0, t1 / 2, (t1 + t2) / 2, (t2 + gmax) / 2]
    for expected, x in zip(GapTerm, points):
        assert fuzzify(GAP_VARIABLES[kind], x).argmax() == expected
        assert classify_gap(kind, x) == expected


@pytest.mark.parametrize("var", ALL_VARS, ids=lambda v: v.name)
def test_membership_continuous(var):
    step = 1e-6
    for _, mf in var.terms:
        for bx in mf.xs:
            xs = np.arange(bx - 50 * step, bx + 50 * step, step)
            vals = np.array([mf(x) for x in xs])
            assert np.max(np.abs(np.diff(vals))) <= 1e-5


@pytest.mark.parametrize(
    "kind, gap, expected",
    [
        ("performance", 0, GapTerm.NONE),
        ("performance", 5, GapTerm.HIGH),
        ("funding", 8.0, GapTerm.EXTREME),
        ("deadline", 15, GapTerm.LOW),
        ("performance", 2, GapTerm.HIGH),
        ("performance", 7, GapTerm.HIGH),
        ("funding", 0.04, GapTerm.NONE),
        ("funding", 0.05, GapTerm.LOW),
        ("deadline", -5, GapTerm.NONE),
    ],
)
def test_classify_gap(kind, gap, expected):
    assert classify_gap(kind, gap) == expected


def test_classify_gap_matches_table_bins():
    for kind, xs in [
        ("performance", range(10)),
        ("deadline", range(100)),
        ("funding", [k / 100 for k in range(901)]),
    ]:
        for x in xs:
            assert classify_gap(kind, x).label == table1_bin(kind, x), (kind, x)


@given(st.sampled_from(list(GapKind)), st.floats(0, 120), st.floats(0, 120))
def test_classify_gap_monotone(kind, a, b):
    lo, hi = sorted((a, b))
    assert classify_gap(kind, lo) <= classify_gap(kind, hi)


@pytest.mark.parametrize(
    "w, expected",
    [(0.0, WeightTerm.NONE), (1.0, WeightTerm.HEAVY), (0.5, WeightTerm.HIGH),
     (1 / 3, WeightTerm.LOW), (0.16, WeightTerm.NONE), (1 / 6, WeightTerm.LOW),
     (-0.2, WeightTerm.NONE), (1.7, WeightTerm.HEAVY)],
)
def test_classify_weight(w, expected):
    assert classify_weight(w) == expected


@given(st.floats(0, 1))
def test_classify_weight_is_nearest_peak(w):
    peaks = [0, 1 / 3, 2 / 3, 1]
    dists = [abs(w - p) for p in peaks]
    best = min(dists)
    # ties resolve upward, so the chosen peak is the highest among the nearest
    candidates = [i for i, d in enumerate(dists) if math.isclose(d, best, abs_tol=1e-12)]
    assert int(classify_weight(w)) in candidates


@given(st.sampled_from(ALL_VARS), st.floats(-200, 200))
def test_fuzzify_partition_property(var, x):
    mv = fuzzify(var, x)
    assert len(mv.degrees) == 4
    assert all(0.0 <= d <= 1.0 for d in mv.degrees)
    assert abs(sum(mv.degrees) - 1.0) <= 1e-9
