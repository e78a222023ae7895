"""Closed form of the level-one area generating function.

``A1 = sum(num) / sum(den)`` where the numerator and denominator are
polynomial combinations of four q-series ``alpha, beta, gamma, delta``.  The
polynomials live in ``data/level1_quotient.json`` so that they can be diffed
against the published table.

Besides exact expansion this module evaluates ``den`` and ``num`` at real
points with certified interval enclosures; that is what the pole location in
:mod:`subconvex.analysis` bisects on.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from .interval import Interval, as_fraction, iv_context, to_iv
from .qseries import SeriesError, TruncatedSeries, div

MAX_PRECISION_BITS = 1024


class PrecisionError(ArithmeticError):
    """The interval could not be made narrow enough within the precision cap."""


@lru_cache(maxsize=1)
def load_table() -> dict:
    text = resources.files("subconvex").joinpath("data/level1_quotient.json").read_text()
    return json.loads(text)


@dataclass(frozen=True)
class ThetaSums:
    alpha: TruncatedSeries
    beta: TruncatedSeries
    gamma: TruncatedSeries
    delta: TruncatedSeries

    def factor(self, name: str, order: int) -> TruncatedSeries:
        if name == "one":
            return TruncatedSeries.one(order)
        if name == "alpha*delta-beta*gamma":
            return self.alpha * self.delta - self.beta * self.gamma
        return getattr(self, name)


@dataclass(frozen=True)
class ClosedForm:
    num: TruncatedSeries
    den: TruncatedSeries


def exponent(i: int) -> int:
    """Power of ``q`` in the i-th summand of every theta sum."""
    return i * (i + 5) // 2


def theta_sums(N: int) -> ThetaSums:
    """The four sums to order ``N``.

    Summands with ``i(i+5)/2 > N + 1`` cannot reach ``q^N`` (gamma and delta
    lose one power of ``q`` to the ``i/q`` factor), so they are skipped.
    """
    if N < 3:
        raise ValueError("theta sums need N >= 3")
    M = N + 1
    alpha = TruncatedSeries.zero(M)
    beta = TruncatedSeries.zero(M)
    q_gamma = TruncatedSeries.zero(M)  # q * gamma
    q_delta = TruncatedSeries.zero(M)  # q * delta
    # base = 1 / ((1-q)^i prod_{k<i} (1-q^{k+1})^2), updated incrementally
    base = TruncatedSeries.one(M)
    # harmonic = sum_{j<=i} q^{j+1} / (1 - q^{j+1})
    harmonic = TruncatedSeries.zero(M)
    i = 1
    while exponent(i) <= M:
        base = base.div_one_minus(1)
        if i > 1:
            base = base.div_one_minus(i, 2)
        prev_harmonic = harmonic
        harmonic = harmonic + TruncatedSeries.monomial(i + 1, M).div_one_minus(i + 1)
        b_term = base.shift(exponent(i)).div_one_minus(i + 1)
        a_term = b_term.div_one_minus(i + 1)
        alpha = alpha + a_term
        beta = beta + b_term
        q_gamma = q_gamma + a_term * (harmonic * 2 + i)
        last = TruncatedSeries.monomial(i + 1, M).div_one_minus(i + 1)
        q_delta = q_delta + b_term * (prev_harmonic * 2 + last + i)
        i += 1
    gamma = div(q_gamma, TruncatedSeries.monomial(1, M))
    delta = div(q_delta, TruncatedSeries.monomial(1, M))
    return ThetaSums(alpha.truncate(N), beta.truncate(N), gamma, delta)


def closed_form(N: int) -> ClosedForm:
    """Numerator and denominator series to order ``N``."""
    th = theta_sums(max(N, 3))
    table = load_table()
    order = max(N, 3)
    products: dict[str, TruncatedSeries] = {}

    def combine(entries) -> TruncatedSeries:
        acc = TruncatedSeries.zero(order)
        for e in entries:
            f = e["factor"]
            if f not in products:
                products[f] = th.factor(f, order)
            poly = TruncatedSeries.polynomial(e["coefficients"], order)
            acc = acc + poly * products[f]
        return acc

    num = combine(table["num"]).truncate(N)
    den = combine(table["den"]).truncate(N)
    return ClosedForm(num, den)


def a1_closed(N: int) -> TruncatedSeries:
    """Area generating function of level-one column-subconvex polyhexes to order ``N``."""
    if N < 1:
        raise ValueError("order must be >= 1")
    cf = closed_form(N)
    if cf.den[0] == 0:
        raise SeriesError("denominator is not invertible")
    return div(cf.num, cf.den)


# ----------------------------------------------------------------------
# certified numeric evaluation


def _poly_iv(ctx, coeffs, X):
    acc = ctx.mpf(0)
    for c in reversed(coeffs):
        acc = acc * X + c
    return acc


def _theta_iv(ctx, X, x: Fraction, tol):
    """Interval enclosures of alpha..delta at ``X`` including a tail bound."""
    zero = ctx.mpf(0)
    if x == 0:
        return zero, zero, zero, zero
    one = ctx.mpf(1)
    alpha = beta = gq = dq = zero
    base = one  # 1/((1-x)^i prod_{k<i}(1-x^{k+1})^2)
    harmonic = zero  # sum_{j<=i} x^{j+1}/(1-x^{j+1})
    # crude bound on the bracketed factors divided by i, used in the tail
    slack = one / X + 2 * X / ((1 - X) * (1 - X**2))
    i = 1
    while True:
        base = base / (1 - X)
        if i > 1:
            base = base / (1 - X**i) ** 2
        xi1 = X ** (i + 1)
        last = xi1 / (1 - xi1)
        prev_harmonic = harmonic
        harmonic = harmonic + last
        b_term = X ** exponent(i) * base / (1 - xi1)
        a_term = b_term / (1 - xi1)
        alpha += a_term
        beta += b_term
        gq += a_term * (i + 2 * harmonic)
        dq += b_term * (i + 2 * prev_harmonic + last)
        i += 1
        # tail over summands >= i: ratio of consecutive summands <= r
        r = X ** (i + 3) / ((1 - X) * (1 - X ** (i + 1)) ** 2)
        if r.b >= 0.5:
            if i > 10_000:
                raise PrecisionError("theta sums do not converge at this point")
            continue
        nxt = X ** exponent(i) * base / ((1 - X) * (1 - X**i) ** 2 * (1 - X ** (i + 1)) ** 2)
        tail_ab = nxt / (1 - r)
        tail_gd = slack * nxt * (i / (1 - r) + r / (1 - r) ** 2)
        if tail_gd.b < tol and tail_ab.b < tol:
            break
    t_ab = ctx.mpf([0, tail_ab.b])
    t_gd = ctx.mpf([0, tail_gd.b])
    return alpha + t_ab, beta + t_ab, gq / X + t_gd, dq / X + t_gd


def _evaluate(x: Fraction, bits: int, which: str):
    ctx = iv_context(bits)
    X = to_iv(ctx, x)
    tol = ctx.mpf(2) ** (-bits)
    a, b, g, d = _theta_iv(ctx, X, x, tol)
    values = {"one": ctx.mpf(1), "alpha": a, "beta": b, "gamma": g, "delta": d}
    values["alpha*delta-beta*gamma"] = a * d - b * g
    acc = ctx.mpf(0)
    for e in load_table()[which]:
        acc += _poly_iv(ctx, e["coefficients"], X) * values[e["factor"]]
    return Interval.from_iv(acc)


def _ladder(x, bits: int, target_width, which: str) -> Interval:
    x = as_fraction(x)
    if target_width is None:
        return _evaluate(x, bits, which)
    target = as_fraction(target_width)
    while True:
        result = _evaluate(x, bits, which)
        if result.width <= target:
            return result
        if bits >= MAX_PRECISION_BITS:
            raise PrecisionError(
                f"width {float(result.width):.3g} above target at {bits} bits"
            )
        bits = min(2 * bits, MAX_PRECISION_BITS)


def eval_denominator(x, precision_bits: int = 64, target_width=None) -> Interval:
    """Certified enclosure of ``sum(den)`` at a real point ``0 <= x <= 1/2``.

    With ``target_width`` the precision is doubled from ``precision_bits``
    until the enclosure is narrow enough (capped at 1024 bits).
    """
    xf = as_fraction(x)
    if not 0 <= xf <= Fraction(1, 2):
        raise ValueError("denominator evaluation needs 0 <= x <= 1/2")
    return _ladder(xf, precision_bits, target_width, "den")


def eval_numerator(x, precision_bits: int = 64, target_width=None) -> Interval:
    """Certified enclosure of ``sum(num)`` at ``0 <= x < 1``."""
    xf = as_fraction(x)
    if not 0 <= xf < 1:
        raise ValueError("numerator evaluation needs 0 <= x < 1")
    return _ladder(xf, precision_bits, target_width, "num")
