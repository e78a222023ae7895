import json
from fractions import Fraction

import pytest

from subconvex.analysis import (
    AnalysisError,
    NoSignChangeError,
    PrecisionCapError,
    amplitude,
    analyze,
    growth_constant,
    locate_pole,
    lower_bound,
    nth_root_floor,
    ratio_extrapolate,
)
from subconvex.interval import Interval

from _oracles import closed, dp


def linear(root):
    def ev(x, bits):
        return Interval.point(x - root)

    return ev


def test_bisection_brackets_a_rational_root():
    iv = locate_pole(linear(Fraction(1, 3)), (0, 1), Fraction(1, 10**12))
    assert iv.contains(Fraction(1, 3)) and iv.width <= Fraction(1, 10**12)


def test_bisection_needs_a_sign_change():
    with pytest.raises(NoSignChangeError):
        locate_pole(linear(Fraction(2)), (0, 1), Fraction(1, 100))


def test_bisection_reports_the_precision_cap():
    calls = []

    def fuzzy(x, bits):
        calls.append(bits)
        # wide enclosure near the root regardless of precision
        v = x - Fraction(1, 2)
        return Interval(v - Fraction(1, 1000), v + Fraction(1, 1000))

    with pytest.raises(PrecisionCapError) as err:
        locate_pole(fuzzy, (0, 1), Fraction(1, 10**9), max_bits=256)
    assert err.value.best.contains(Fraction(1, 2))
    assert max(calls) == 256


def test_growth_constant_swaps_ends():
    tau = growth_constant(Interval(Fraction(1, 4), Fraction(1, 2)))
    assert tau == Interval(Fraction(2), Fraction(4))
    with pytest.raises(ValueError):
        growth_constant(Interval(Fraction(0), Fraction(1)))


def test_exact_root_rounding():
    assert nth_root_floor(8, 3, 5) == 2
    # 2^(1/2) = 1.41421356...
    assert nth_root_floor(2, 2, 6) == Fraction(1414213, 10**6)
    r = nth_root_floor(10**30 + 1, 7, 20)
    assert r ** 7 <= 10**30 + 1 < (r + Fraction(1, 10**20)) ** 7


def test_constant_sequence():
    ones = [1] * 25
    assert lower_bound(ones) == (1, 1)
    value, _ = amplitude(ones, 1)
    assert value == 1


def test_geometric_sequence_ratio_is_exact():
    est, spread = ratio_extrapolate([3**n for n in range(1, 20)])
    assert est == 3 and spread == 0


def test_too_few_terms():
    with pytest.raises(AnalysisError):
        ratio_extrapolate([1] * 14)
    with pytest.raises(AnalysisError):
        amplitude([1] * 19, 1)
    with pytest.raises(AnalysisError):
        lower_bound([])


def test_level_one_ratio_extrapolation_from_40_terms():
    est, _ = ratio_extrapolate(closed(40))
    assert abs(est - 4.319139) <= 1e-4


def test_level_two_bound_is_monotone_in_term_count():
    counts = dp(2, 40).complete.counts
    bounds = [lower_bound(counts[:n])[0] for n in range(1, 41)]
    assert bounds == sorted(bounds)
    assert bounds[-1] < Fraction(4509480, 10**6)


def test_report_serialises_intervals_as_decimal_strings():
    q_c = Interval(Fraction(2315276131, 10**10), Fraction(2315276132, 10**10))
    rep = analyze(closed(60), "l1", q_c=q_c)
    data = json.loads(json.dumps(rep.to_dict(12)))
    assert data["q_c"] == ["0.231527613100", "0.231527613200"]
    assert data["tau"][0] < data["tau"][1]
    assert isinstance(data["lower_bound"], str)
    assert data["amplitude_method"]


def test_lower_bound_may_not_exceed_certified_constant():
    with pytest.raises(AnalysisError):
        analyze(closed(60), "l1", q_c=Interval(Fraction(1, 2), Fraction(6, 10)))
