"""Truncated formal power series in ``q`` with exact rational coefficients.

Coefficients are stored as Python ``int`` whenever they are integral and as
:class:`fractions.Fraction` otherwise, so counting series stay on the fast
integer path while Gaussian elimination is still free to produce genuine
fractions.

A :class:`TruncatedSeries` of order ``N`` knows the coefficients of
``q^0 .. q^N``; everything above is unknown.  Binary operations return the
smaller of the two orders.  Nothing in this module uses floating point.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]


class SeriesError(ArithmeticError):
    """Raised for operations that would fabricate coefficients."""


def _norm(c) -> Scalar:
    if type(c) is int:
        return c
    if isinstance(c, bool) or not isinstance(c, Rational):
        raise TypeError(f"exact rational coefficient expected, got {type(c).__name__}")
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


def _parse_scalar(text: str) -> Scalar:
    return _norm(Fraction(text))


def _format_scalar(c: Scalar) -> str:
    if isinstance(c, int):
        return str(c)
    return f"{c.numerator}/{c.denominator}"


class TruncatedSeries:
    """Dense power series ``c_0 + c_1 q + ... + c_N q^N + O(q^{N+1})``."""

    __slots__ = ("_c", "order")

    def __init__(self, coeffs: Iterable = (), order: int | None = None):
        cs = [_norm(c) for c in coeffs]
        if order is None:
            order = len(cs) - 1
        if order < 0:
            raise ValueError("order must be >= 0")
        if len(cs) > order + 1:
            cs = cs[: order + 1]
        else:
            cs.extend([0] * (order + 1 - len(cs)))
        self._c: tuple = tuple(cs)
        self.order: int = order

    @classmethod
    def _raw(cls, cs: list, order: int) -> "TruncatedSeries":
        # cs is already normalised and has length order + 1
        s = object.__new__(cls)
        s._c = tuple(cs)
        s.order = order
        return s

    # ------------------------------------------------------------------
    # constructors
    @classmethod
    def zero(cls, order: int) -> "TruncatedSeries":
        return cls._raw([0] * (order + 1), order)

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        return cls.monomial(0, order)

    @classmethod
    def monomial(cls, n: int, order: int, coeff: Scalar = 1) -> "TruncatedSeries":
        """``coeff * q^n`` (vanishes if ``n`` exceeds ``order``)."""
        if n < 0:
            raise ValueError("negative exponent")
        cs = [0] * (order + 1)
        if n <= order:
            cs[n] = _norm(coeff)
        return cls._raw(cs, order)

    @classmethod
    def polynomial(cls, coeffs: Sequence, order: int) -> "TruncatedSeries":
        """Embed a polynomial given lowest degree first; high terms are cut."""
        return cls(coeffs, order)

    # ------------------------------------------------------------------
    # access
    @property
    def coeffs(self) -> tuple:
        return self._c

    def __getitem__(self, n: int) -> Scalar:
        if n < 0:
            return 0
        if n > self.order:
            raise IndexError(f"coefficient q^{n} is beyond order {self.order}")
        return self._c[n]

    def __len__(self) -> int:
        return self.order + 1

    def __iter__(self):
        return iter(self._c)

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, ``None`` if all known ones vanish."""
        for n, c in enumerate(self._c):
            if c:
                return n
        return None

    def is_integral(self) -> bool:
        return all(type(c) is int for c in self._c)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise SeriesError(f"cannot raise order {self.order} to {order}")
        return TruncatedSeries._raw(list(self._c[: order + 1]), order)

    # ------------------------------------------------------------------
    # ring operations
    def _coerce(self, other) -> "TruncatedSeries | None":
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, Rational) and not isinstance(other, bool):
            return TruncatedSeries.monomial(0, self.order, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = min(self.order, o.order)
        a, b = self._c, o._c
        return TruncatedSeries._raw([_norm(a[i] + b[i]) for i in range(n + 1)], n)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries._raw([-c for c in self._c], self.order)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = min(self.order, o.order)
        a, b = self._c, o._c
        return TruncatedSeries._raw([_norm(a[i] - b[i]) for i in range(n + 1)], n)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def scale(self, k: Scalar) -> "TruncatedSeries":
        k = _norm(k)
        return TruncatedSeries._raw([_norm(k * c) for c in self._c], self.order)

    def __mul__(self, other):
        if isinstance(other, Rational) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        n = min(self.order, other.order)
        a, b = self._c, other._c
        va, vb = self.valuation(), other.valuation()
        out = [0] * (n + 1)
        if va is None or vb is None:
            return TruncatedSeries._raw(out, n)
        # skip leading zeros; the bulk of the cost is here
        for i in range(va, n + 1 - vb):
            ai = a[i]
            if not ai:
                continue
            for j in range(vb, n + 1 - i):
                bj = b[j]
                if bj:
                    out[i + j] += ai * bj
        return TruncatedSeries._raw([_norm(c) for c in out], n)

    __rmul__ = __mul__

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by ``q^k``; the order is kept, top coefficients fall off."""
        if k < 0:
            raise ValueError("use div for negative shifts")
        cs = [0] * k + list(self._c)
        return TruncatedSeries._raw(cs[: self.order + 1], self.order)

    def div_one_minus(self, k: int, power: int = 1) -> "TruncatedSeries":
        """Multiply by ``1/(1 - q^k)**power`` via the recurrence ``c_n += c_{n-k}``."""
        if k < 1:
            raise ValueError("k must be >= 1")
        cs = list(self._c)
        for _ in range(power):
            for n in range(k, self.order + 1):
                if cs[n - k]:
                    cs[n] = _norm(cs[n] + cs[n - k])
        return TruncatedSeries._raw(cs, self.order)

    def __truediv__(self, other):
        if isinstance(other, Rational) and not isinstance(other, bool):
            if other == 0:
                raise ZeroDivisionError("division by zero scalar")
            return self.scale(Fraction(1) / Fraction(other))
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return div(self, other)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return div(o, self)

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        result = TruncatedSeries.one(self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def derivative(self) -> "TruncatedSeries":
        """Formal ``d/dq``; the order drops by one."""
        if self.order == 0:
            raise SeriesError("derivative of an order-0 series has no known coefficients")
        return TruncatedSeries._raw(
            [_norm(n * self._c[n]) for n in range(1, self.order + 1)], self.order - 1
        )

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, TruncatedSeries) else other
        if o is None:
            return NotImplemented
        n = min(self.order, o.order)
        return self._c[: n + 1] == o._c[: n + 1]

    def __hash__(self):
        return hash((self.order, self._c))

    def evaluate(self, x: Scalar) -> Scalar:
        """Exact value of the truncated polynomial at a rational point."""
        acc: Scalar = 0
        for c in reversed(self._c):
            acc = acc * x + c
        return _norm(acc) if isinstance(acc, Rational) else acc

    # ------------------------------------------------------------------
    # text and JSON
    def __str__(self) -> str:
        terms = []
        for n, c in enumerate(self._c):
            if not c:
                continue
            if n == 0:
                terms.append(_format_scalar(c))
            else:
                terms.append(f"{_format_scalar(c)}*q^{n}")
        body = " + ".join(terms) if terms else "0"
        return f"{body} + O(q^{self.order + 1})"

    def __repr__(self) -> str:
        return f"TruncatedSeries({list(self._c)!r}, order={self.order})"

    def to_json(self) -> list[str]:
        return [_format_scalar(c) for c in self._c]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "TruncatedSeries":
        if not data:
            raise ValueError("empty coefficient list")
        return cls([_parse_scalar(str(s)) for s in data])


def div(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Quotient ``a / b`` with ``q^v`` cancelled first when ``b(0) == 0``.

    Cancelling loses ``v`` orders of precision on both sides.  Dividing by a
    series whose valuation exceeds the dividend's raises :class:`SeriesError`.
    """
    vb = b.valuation()
    if vb is None:
        raise SeriesError("division by a series that vanishes to its known order")
    if vb:
        va = a.valuation()
        if va is not None and va < vb:
            raise SeriesError(
                f"dividend valuation {va} is below divisor valuation {vb}"
            )
        if a.order < vb:
            raise SeriesError("dividend order too small to cancel q^%d" % vb)
        a = TruncatedSeries._raw(list(a.coeffs[vb:]), a.order - vb)
        b = TruncatedSeries._raw(list(b.coeffs[vb:]), b.order - vb)
    n = min(a.order, b.order)
    ac, bc = a.coeffs, b.coeffs
    b0 = bc[0]
    unit = b0 == 1 or b0 == -1
    inv0 = b0 if unit else Fraction(1) / b0
    nz = [k for k in range(1, n + 1) if bc[k]]
    out: list = [0] * (n + 1)
    for m in range(n + 1):
        acc = ac[m]
        for k in nz:
            if k > m:
                break
            r = out[m - k]
            if r:
                acc -= bc[k] * r
        out[m] = _norm(acc * inv0)
    return TruncatedSeries._raw(out, n)


def geom(k: int, order: int) -> TruncatedSeries:
    """Expansion of ``1/(1 - q^k)``: ones at multiples of ``k``."""
    if k < 1:
        raise ValueError("geom needs k >= 1")
    return TruncatedSeries._raw([1 if n % k == 0 else 0 for n in range(order + 1)], order)


def q(order: int) -> TruncatedSeries:
    """The formal variable itself."""
    return TruncatedSeries.monomial(1, order)


# ----------------------------------------------------------------------
# bivariate series


class BivariateSeries:
    """Series in ``q`` and ``t`` with ``t``-degree never above ``q``-degree.

    ``rows[n][k]`` is the coefficient of ``q^n t^k`` for ``0 <= k <= n <= order``.
    The triangular shape is lossless for every object built here because a
    column's height never exceeds the polyomino's area.
    """

    __slots__ = ("rows", "order")

    def __init__(self, rows: Sequence[Sequence], order: int | None = None):
        if order is None:
            order = len(rows) - 1
        out = []
        for n in range(order + 1):
            src = list(rows[n]) if n < len(rows) else []
            if len(src) > n + 1 and any(src[n + 1 :]):
                raise SeriesError(f"t-degree exceeds q-degree in row {n}")
            src = [_norm(c) for c in src[: n + 1]]
            src.extend([0] * (n + 1 - len(src)))
            out.append(tuple(src))
        self.rows: tuple = tuple(out)
        self.order = order

    @classmethod
    def _raw(cls, rows: list, order: int) -> "BivariateSeries":
        s = object.__new__(cls)
        s.rows = tuple(tuple(r) for r in rows)
        s.order = order
        return s

    @classmethod
    def zero(cls, order: int) -> "BivariateSeries":
        return cls._raw([[0] * (n + 1) for n in range(order + 1)], order)

    @classmethod
    def one(cls, order: int) -> "BivariateSeries":
        rows = [[0] * (n + 1) for n in range(order + 1)]
        rows[0][0] = 1
        return cls._raw(rows, order)

    @classmethod
    def from_series(
        cls, s: TruncatedSeries, q_shift: int = 0, t_power: int = 0, order: int | None = None
    ) -> "BivariateSeries":
        """``q^q_shift * t^t_power * s(q)`` as a bivariate series."""
        if order is None:
            order = s.order + q_shift
        if order > s.order + q_shift:
            raise SeriesError("requested order exceeds the source series")
        rows = [[0] * (n + 1) for n in range(order + 1)]
        for n in range(order + 1 - q_shift):
            c = s[n]
            if not c:
                continue
            if t_power > n + q_shift:
                raise SeriesError(f"term q^{n + q_shift} t^{t_power} breaks the triangular layout")
            rows[n + q_shift][t_power] = c
        return cls._raw(rows, order)

    def coeff(self, n: int, k: int) -> Scalar:
        if n > self.order:
            raise IndexError("beyond order")
        return self.rows[n][k] if 0 <= k <= n else 0

    def __add__(self, other: "BivariateSeries") -> "BivariateSeries":
        n = min(self.order, other.order)
        return BivariateSeries._raw(
            [[_norm(a + b) for a, b in zip(self.rows[i], other.rows[i])] for i in range(n + 1)], n
        )

    def __sub__(self, other: "BivariateSeries") -> "BivariateSeries":
        n = min(self.order, other.order)
        return BivariateSeries._raw(
            [[_norm(a - b) for a, b in zip(self.rows[i], other.rows[i])] for i in range(n + 1)], n
        )

    def __neg__(self):
        return BivariateSeries._raw([[-c for c in r] for r in self.rows], self.order)

    def scale(self, k: Scalar) -> "BivariateSeries":
        k = _norm(k)
        return BivariateSeries._raw([[_norm(k * c) for c in r] for r in self.rows], self.order)

    def mul_series(self, s: TruncatedSeries) -> "BivariateSeries":
        """Product with a series in ``q`` alone."""
        n = min(self.order, s.order)
        sc = s.coeffs
        out = [[0] * (i + 1) for i in range(n + 1)]
        for i in range(n + 1):
            row = self.rows[i]
            if not any(row):
                continue
            for j in range(0, n + 1 - i):
                c = sc[j]
                if not c:
                    continue
                dst = out[i + j]
                for k, r in enumerate(row):
                    if r:
                        dst[k] += c * r
        return BivariateSeries._raw([[_norm(c) for c in r] for r in out], n)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return self.mul_series(other)
        if isinstance(other, Rational) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, BivariateSeries):
            return NotImplemented
        n = min(self.order, other.order)
        out = [[0] * (i + 1) for i in range(n + 1)]
        for i in range(n + 1):
            ra = self.rows[i]
            if not any(ra):
                continue
            for j in range(0, n + 1 - i):
                rb = other.rows[j]
                dst = out[i + j]
                for ka, a in enumerate(ra):
                    if not a:
                        continue
                    for kb, b in enumerate(rb):
                        if b:
                            dst[ka + kb] += a * b
        return BivariateSeries._raw([[_norm(c) for c in r] for r in out], n)

    __rmul__ = __mul__

    def div_one_minus(self, a: int, b: int, power: int = 1) -> "BivariateSeries":
        """Multiply by ``1/(1 - q^a t^b)**power`` (needs ``1 <= a`` and ``0 <= b <= a``)."""
        if a < 1 or b < 0 or b > a:
            raise ValueError("need 1 <= a and 0 <= b <= a")
        rows = [list(r) for r in self.rows]
        for _ in range(power):
            for n in range(a, self.order + 1):
                src = rows[n - a]
                dst = rows[n]
                for k, c in enumerate(src):
                    if c:
                        dst[k + b] = _norm(dst[k + b] + c)
        return BivariateSeries._raw(rows, self.order)

    def mul_monomial(self, a: int, b: int) -> "BivariateSeries":
        """Multiply by ``q^a t^b``; raises if a term would leave the triangle."""
        if a < 0 or b < 0:
            raise ValueError("negative exponent")
        rows = [[0] * (n + 1) for n in range(self.order + 1)]
        for n in range(self.order + 1 - a):
            for k, c in enumerate(self.rows[n]):
                if c:
                    if k + b > n + a:
                        raise SeriesError(f"term q^{n + a} t^{k + b} breaks the triangular layout")
                    rows[n + a][k + b] = c
        return BivariateSeries._raw(rows, self.order)

    def scale_t(self, j: int) -> "BivariateSeries":
        """Substitute ``t -> q^j t``: ``q^n t^k`` moves to ``q^{n+jk} t^k``."""
        if j < 0:
            raise ValueError("j must be >= 0")
        rows = [[0] * (n + 1) for n in range(self.order + 1)]
        for n, r in enumerate(self.rows):
            for k, c in enumerate(r):
                if c and n + j * k <= self.order:
                    rows[n + j * k][k] = c
        return BivariateSeries._raw(rows, self.order)

    def __eq__(self, other):
        if not isinstance(other, BivariateSeries):
            return NotImplemented
        n = min(self.order, other.order)
        return self.rows[: n + 1] == other.rows[: n + 1]

    def __hash__(self):
        return hash((self.order, self.rows))

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def __repr__(self):
        return f"BivariateSeries(order={self.order})"


def substitute_qt(coeffs, order: int) -> BivariateSeries:
    """Turn a series in ``q`` and ``u`` into one in ``q`` and ``t`` via ``u -> q t``.

    ``coeffs`` maps ``(n, k)`` to the coefficient of ``q^n u^k`` (a dict) or is
    a nested list ``coeffs[n][k]``.
    """
    rows = [[0] * (n + 1) for n in range(order + 1)]
    if isinstance(coeffs, dict):
        items = coeffs.items()
    else:
        items = (((n, k), c) for n, r in enumerate(coeffs) for k, c in enumerate(r))
    for (n, k), c in items:
        if c and n + k <= order:
            rows[n + k][k] = _norm(rows[n + k][k] + c)
    return BivariateSeries._raw(rows, order)


def specialize(s: BivariateSeries) -> TruncatedSeries:
    """Set ``t = 1``."""
    return TruncatedSeries._raw([_norm(sum(r)) for r in s.rows], s.order)


def dt_at_1(s: BivariateSeries) -> TruncatedSeries:
    """``d/dt`` at ``t = 1``: coefficient ``n`` is ``sum_k k * c[n][k]``."""
    return TruncatedSeries._raw(
        [_norm(sum(k * c for k, c in enumerate(r))) for r in s.rows], s.order
    )
