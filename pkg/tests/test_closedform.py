from fractions import Fraction

import pytest

from subconvex.closedform import (
    a1_closed,
    closed_form,
    eval_denominator,
    eval_numerator,
    exponent,
    theta_sums,
)
from subconvex.interval import Interval
from subconvex.qseries import TruncatedSeries, div, dt_at_1, specialize
from subconvex.temperley import _d_sums

from _oracles import LEVEL1_HEAD


def test_head_of_expansion():
    s = a1_closed(12)
    assert s.is_integral()
    assert list(s.coeffs) == [0] + LEVEL1_HEAD


def test_summand_exponents():
    assert [exponent(i) for i in range(1, 6)] == [3, 7, 12, 18, 25]


def _naive_theta(N):
    """The same sums, expanded with generic series division only."""
    M = N + 1
    one = TruncatedSeries.one(M)

    def om(k):  # 1 - q^k
        return one - TruncatedSeries.monomial(k, M)

    alpha = beta = q_gamma = q_delta = TruncatedSeries.zero(M)
    i = 1
    while exponent(i) <= M:
        den = om(1) ** i
        for k in range(1, i):
            den = den * om(k + 1) ** 2
        base = div(one, den)
        b = div(TruncatedSeries.monomial(exponent(i), M) * base, om(i + 1))
        a = div(b, om(i + 1))
        h = [div(TruncatedSeries.monomial(j + 1, M), om(j + 1)) for j in range(1, i + 1)]
        H = sum(h, TruncatedSeries.zero(M))
        alpha, beta = alpha + a, beta + b
        q_gamma = q_gamma + a * (H * 2 + i)
        q_delta = q_delta + b * ((H - h[-1]) * 2 + h[-1] + i)
        i += 1
    return alpha, beta, q_gamma, q_delta


@pytest.mark.parametrize("N", [3, 10, 30])
def test_theta_sums_against_generic_division(N):
    th = theta_sums(N)
    alpha, beta, q_gamma, q_delta = _naive_theta(N)
    assert th.alpha == alpha.truncate(N)
    assert th.beta == beta.truncate(N)
    assert th.gamma.shift(1) == q_gamma.truncate(N)
    assert th.delta.shift(1) == q_delta.truncate(N)


def test_theta_sums_are_the_t_derivatives_of_the_bivariate_sums():
    N = 40
    th = theta_sums(N)
    sum_a, sum_f = _d_sums(N)
    assert specialize(sum_a) == th.alpha
    assert specialize(sum_f) == th.beta
    assert dt_at_1(sum_a) == th.gamma.shift(1).truncate(N)
    assert dt_at_1(sum_f) == th.delta.shift(1).truncate(N)


def test_theta_sums_reject_tiny_orders():
    with pytest.raises(ValueError):
        theta_sums(2)


def test_numerator_over_denominator_is_the_series():
    cf = closed_form(60)
    assert div(cf.num, cf.den) == a1_closed(60)


def test_closed_form_runtime_to_order_250():
    import time

    t = time.perf_counter()
    s = a1_closed(250)
    assert time.perf_counter() - t < 10
    assert s.order == 250 and s.is_integral()


# ------------------------------------------------------------ evaluation


def test_denominator_at_zero_is_one():
    assert eval_denominator(0).contains(1)


def test_enclosure_agrees_with_truncated_series_at_one_tenth():
    x = Fraction(1, 10)
    cf = closed_form(200)
    for which, fn in (("den", eval_denominator), ("num", eval_numerator)):
        series = getattr(cf, which)
        value = series.evaluate(x)
        iv = fn(x, 128)
        # the omitted tail of the order-200 truncation is below 10^-190
        slack = Fraction(1, 10**150)
        assert iv.lo - slack <= value <= iv.hi + slack, which


def test_denominator_changes_sign_between_023_and_024():
    assert eval_denominator(Fraction(23, 100)).sign() == 1
    assert eval_denominator(Fraction(24, 100)).sign() == -1


def test_numerator_positive_on_a_grid():
    for k in range(1, 81):
        assert eval_numerator(Fraction(k, 100)).sign() == 1, k


def test_domain_is_enforced():
    with pytest.raises(ValueError):
        eval_denominator(Fraction(-1, 10))
    with pytest.raises(ValueError):
        eval_denominator(Fraction(6, 10))
    with pytest.raises(ValueError):
        eval_numerator(1)


def test_enclosures_shrink_and_stay_consistent_with_precision():
    x = Fraction(2315, 10000)
    previous = None
    for bits in (64, 128, 256, 512):
        iv = eval_denominator(x, bits)
        if previous is not None:
            assert iv.width <= previous.width
            assert iv.lo <= previous.hi and previous.lo <= iv.hi
        previous = iv


def test_target_width_drives_precision():
    iv = eval_denominator(Fraction(1, 5), target_width=Fraction(1, 10**60))
    assert isinstance(iv, Interval) and iv.width <= Fraction(1, 10**60)
