from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from subconvex.qseries import (
    BivariateSeries,
    SeriesError,
    TruncatedSeries,
    div,
    dt_at_1,
    geom,
    q,
    specialize,
    substitute_qt,
)

ORDER = 7
scalars = st.one_of(
    st.integers(-30, 30),
    st.fractions(min_value=-10, max_value=10, max_denominator=7),
)
series = st.lists(scalars, min_size=ORDER + 1, max_size=ORDER + 1).map(
    lambda cs: TruncatedSeries(cs, ORDER)
)
units = st.tuples(st.sampled_from([1, -1, 2, Fraction(1, 3)]), series).map(
    lambda p: TruncatedSeries([p[0]] + list(p[1].coeffs[1:]), ORDER)
)

CASES = 200  # seven properties below: 1400 randomized cases


@settings(max_examples=CASES, deadline=None)
@given(series, series, series)
def test_addition_is_an_abelian_group(a, b, c):
    zero = TruncatedSeries.zero(ORDER)
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a + zero == a
    assert a + (-a) == zero
    assert a - b == a + (-b)


@settings(max_examples=CASES, deadline=None)
@given(series, series, series)
def test_multiplication_is_commutative_associative_distributive(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a * TruncatedSeries.one(ORDER) == a


@settings(max_examples=CASES, deadline=None)
@given(series, units)
def test_division_inverts_multiplication(a, u):
    assert (a * u) / u == a
    assert div(a, u) * u == a


@settings(max_examples=CASES, deadline=None)
@given(series)
def test_json_round_trip_is_exact(a):
    back = TruncatedSeries.from_json(a.to_json())
    assert back == a and back.order == a.order
    assert all(type(x) is type(y) for x, y in zip(back.coeffs, a.coeffs))


@settings(max_examples=CASES, deadline=None)
@given(series, st.integers(1, 4), st.integers(1, 3))
def test_div_one_minus_matches_geometric_product(a, k, p):
    expect = a
    for _ in range(p):
        expect = expect * geom(k, ORDER)
    assert a.div_one_minus(k, p) == expect
    assert a.div_one_minus(k, p) * (TruncatedSeries.one(ORDER) - TruncatedSeries.monomial(k, ORDER)) ** p == a


@settings(max_examples=CASES, deadline=None)
@given(series, series, st.integers(0, 5))
def test_power_shift_and_derivative_rules(a, b, e):
    assert a ** e == (a ** max(e - 1, 0)) * (a if e else TruncatedSeries.one(ORDER))
    assert a.shift(2) == a * TruncatedSeries.monomial(2, ORDER)
    # Leibniz rule, compared to the reduced order
    assert (a * b).derivative() == a.derivative() * b.truncate(ORDER - 1) + a.truncate(ORDER - 1) * b.derivative()


@settings(max_examples=CASES, deadline=None)
@given(st.lists(st.lists(st.integers(-9, 9), min_size=4, max_size=4), min_size=4, max_size=4))
def test_substitution_then_specialisation(grid):
    N = 7
    s = substitute_qt(grid, N)
    # t = 1 after u = q t gives sum_{n,k} c[n][k] q^{n+k}
    expect = [0] * (N + 1)
    deriv = [0] * (N + 1)
    for n, row in enumerate(grid):
        for k, c in enumerate(row):
            if n + k <= N:
                expect[n + k] += c
                deriv[n + k] += k * c
    assert specialize(s) == TruncatedSeries(expect, N)
    assert dt_at_1(s) == TruncatedSeries(deriv, N)


def test_integral_coefficients_stay_ints():
    s = TruncatedSeries([1, 2, 3], 5) * TruncatedSeries([Fraction(4, 2), 1], 5)
    assert s.is_integral()
    assert all(type(c) is int for c in s.coeffs)


def test_one_over_one_minus_q():
    one = TruncatedSeries.one(6)
    assert one / (one - q(6)) == TruncatedSeries([1] * 7)


def test_order_is_the_minimum_of_the_operands():
    a = TruncatedSeries([1, 1, 1], 2)
    b = TruncatedSeries([1] * 10, 9)
    assert (a + b).order == 2
    assert (a * b).order == 2


def test_division_cancels_common_power_of_q():
    num = TruncatedSeries([0, 0, 3, 3], 6)
    den = TruncatedSeries([0, 0, 1], 6)
    out = num / den
    assert out.order == 4
    assert out == TruncatedSeries([3, 3], 4)


def test_division_by_series_of_higher_valuation_fails():
    with pytest.raises(SeriesError):
        div(TruncatedSeries([0, 1], 5), TruncatedSeries([0, 0, 1], 5))
    with pytest.raises(SeriesError):
        div(TruncatedSeries.one(5), TruncatedSeries.zero(5))


def test_truncate_cannot_invent_coefficients():
    with pytest.raises(SeriesError):
        TruncatedSeries.one(3).truncate(4)


def test_string_form_is_sparse():
    assert str(TruncatedSeries([0, 1, 0, Fraction(-1, 2)], 3)) == "1*q^1 + -1/2*q^3 + O(q^4)"


def test_evaluate_is_exact():
    s = TruncatedSeries([1, 2, 3], 2)
    assert s.evaluate(Fraction(1, 2)) == Fraction(11, 4)


def test_bivariate_helpers_agree_with_direct_expansion():
    N = 8
    # 1/(1 - q t) -> sum q^n t^n
    b = BivariateSeries.one(N).div_one_minus(1, 1)
    assert all(b.coeff(n, n) == 1 for n in range(N + 1))
    assert specialize(b) == TruncatedSeries([1] * (N + 1))
    # t -> q t scales row (n, k) to (n + k, k)
    m = BivariateSeries.from_series(TruncatedSeries([0, 1], N), 0, 1, N)  # q t
    assert m.scale_t(1).coeff(2, 1) == 1
    assert m.mul_monomial(2, 1).coeff(3, 2) == 1
    with pytest.raises(SeriesError):
        BivariateSeries([[0, 1]], 1)
