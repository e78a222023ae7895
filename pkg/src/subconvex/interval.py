"""Closed intervals with exact rational endpoints.

Interval arithmetic itself is delegated to mpmath's interval context, which
rounds outward at a chosen binary precision.  This module only converts the
results into exact endpoints and provides directed decimal formatting.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from mpmath.ctx_iv import MPIntervalContext
from mpmath.libmp import finf, fnan, fninf, to_rational


def iv_context(bits: int) -> MPIntervalContext:
    """A private interval context; contexts are not shared between calls."""
    ctx = MPIntervalContext()
    ctx.prec = bits
    return ctx


def _raw_to_fraction(raw) -> Fraction:
    if raw in (finf, fninf, fnan):
        raise ValueError("non-finite endpoint")
    p, q = to_rational(raw)
    return Fraction(int(p), int(q))


def as_fraction(x) -> Fraction:
    """Exact rational for ints, Fractions, floats and decimal strings."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, float, str)):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def to_iv(ctx: MPIntervalContext, x: Fraction):
    """Enclosure of a rational number in ``ctx``."""
    x = Fraction(x)
    if x.denominator == 1:
        return ctx.mpf(x.numerator)
    return ctx.mpf(x.numerator) / ctx.mpf(x.denominator)


def floor_decimal(x: Fraction, digits: int) -> str:
    scaled = (x.numerator * 10**digits) // x.denominator
    return _fixed(scaled, digits)


def ceil_decimal(x: Fraction, digits: int) -> str:
    scaled = -((-x.numerator * 10**digits) // x.denominator)
    return _fixed(scaled, digits)


def _fixed(scaled: int, digits: int) -> str:
    sign = "-" if scaled < 0 else ""
    s = str(abs(scaled)).rjust(digits + 1, "0")
    if digits == 0:
        return sign + s
    return f"{sign}{s[:-digits]}.{s[-digits:]}"


class Interval(NamedTuple):
    lo: Fraction
    hi: Fraction

    @classmethod
    def point(cls, x) -> "Interval":
        x = as_fraction(x)
        return cls(x, x)

    @classmethod
    def from_iv(cls, v) -> "Interval":
        a, b = v._mpi_
        return cls(_raw_to_fraction(a), _raw_to_fraction(b))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        x = as_fraction(x)
        return self.lo <= x <= self.hi

    def sign(self) -> int:
        """+1 or -1 when certain, 0 when the interval touches zero."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        return 0

    def reciprocal(self) -> "Interval":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval contains zero")
        return Interval(1 / self.hi, 1 / self.lo)

    def subset_of(self, other: "Interval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def to_json(self, digits: int = 20) -> list[str]:
        return [floor_decimal(self.lo, digits), ceil_decimal(self.hi, digits)]

    def __str__(self) -> str:
        return f"[{floor_decimal(self.lo, 15)}, {ceil_decimal(self.hi, 15)}]"
