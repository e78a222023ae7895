"""The level-one functional equations, assembled and solved over series.

Six unknowns are solved for: ``A1`` (area generating function), ``B1`` (the
same weighted by the last column's height), ``C1`` (incomplete figures),
``D(q)``, ``D'(q)`` and the auxiliary ``F``.  The iterated equation for
``D(u)`` has already been unrolled into the theta sums of
:mod:`subconvex.closedform`, so the system is linear with series
coefficients and is solved by Gaussian elimination over ``Q[[q]]``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .closedform import exponent, theta_sums
from .lattice import ClassLabel
from .qseries import BivariateSeries, SeriesError, TruncatedSeries, div

UNKNOWNS = ("A1", "B1", "C1", "Dq", "Dprime_q", "F")


@dataclass(frozen=True)
class SolvedSeries:
    A1: TruncatedSeries
    B1: TruncatedSeries
    C1: TruncatedSeries
    Dq: TruncatedSeries
    Dprime_q: TruncatedSeries
    F: TruncatedSeries

    @property
    def order(self) -> int:
        return self.A1.order

    def as_list(self) -> list[TruncatedSeries]:
        return [getattr(self, name) for name in UNKNOWNS]


@dataclass(frozen=True)
class SeriesLinearSystem:
    """``matrix @ x = rhs`` with unknowns ordered as :data:`UNKNOWNS`.

    Row ``i`` is the equation for the ``i``-th unknown with every unknown moved
    to the left, so the diagonal entries have constant term 1.
    """

    matrix: tuple[tuple[TruncatedSeries, ...], ...]
    rhs: tuple[TruncatedSeries, ...]
    labels: tuple[str, ...] = ("A1", "B1", "C1", "D(q)", "D'(q)", "F")

    @property
    def order(self) -> int:
        return self.rhs[0].order


def _ratio(coeffs, power: int, order: int) -> TruncatedSeries:
    """``poly(q) / (1 - q)^power``."""
    return TruncatedSeries.polynomial(coeffs, order).div_one_minus(1, power)


def build_system(N: int) -> SeriesLinearSystem:
    """Assemble the six equations, expanded to order ``N``."""
    if N < 6:
        raise ValueError("system needs N >= 6")
    M = N
    zero = TruncatedSeries.zero(M)
    one = TruncatedSeries.one(M)
    th = theta_sums(M)

    # A1 = q/(1-q) + q/(1-q)^2 A1 + q/(1-q) B1 + q^2/(1-q)^2 (B1 - A1)
    #      + [q^2/(1-q)^2 + 2q^3/(1-q)^3] C1 - 2q^2/(1-q)^3 D(q)
    r_a = [
        one - _ratio([0, 1], 2, M) + _ratio([0, 0, 1], 2, M),
        -(_ratio([0, 1], 1, M) + _ratio([0, 0, 1], 2, M)),
        -(_ratio([0, 0, 1], 2, M) + _ratio([0, 0, 0, 2], 3, M)),
        _ratio([0, 0, 2], 3, M),
        zero,
        zero,
    ]
    # B1 = q/(1-q)^2 + (q+q^2)/(1-q)^3 A1 + q/(1-q)^2 B1 + (3q^2-q^3)/(1-q)^3 (B1 - A1)
    #      + [2q^2/(1-q)^3 + (8q^3-2q^4)/(1-q)^4] C1 - 6q^2/(1-q)^4 D(q) - 2q^3/(1-q)^3 D'(q)
    r_b = [
        -(_ratio([0, 1, 1], 3, M) - _ratio([0, 0, 3, -1], 3, M)),
        one - _ratio([0, 1], 2, M) - _ratio([0, 0, 3, -1], 3, M),
        -(_ratio([0, 0, 2], 3, M) + _ratio([0, 0, 0, 8, -2], 4, M)),
        _ratio([0, 0, 6], 4, M),
        _ratio([0, 0, 0, 2], 3, M),
        zero,
    ]
    # C1 = q^2/(1-q)^2 + (4q^2-2q^3)/(1-q)^3 A1 + 2q^2/(1-q)^2 C1 + 2q^2/(1-q)^3 D(q)
    r_c = [
        -_ratio([0, 0, 4, -2], 3, M),
        zero,
        one - _ratio([0, 0, 2], 2, M),
        -_ratio([0, 0, 2], 3, M),
        zero,
        zero,
    ]
    # D(q) = alpha A1 + beta F
    r_d = [-th.alpha, zero, zero, one, zero, -th.beta]
    # D'(q) = gamma A1 + delta F
    r_dp = [-th.gamma, zero, zero, zero, one, -th.delta]
    # F = 1 + (3-2q)/(1-q) A1 + 2 C1 + 1/(1-q) D(q)
    r_f = [-_ratio([3, -2], 1, M), zero, one * -2, -_ratio([1], 1, M), zero, one]
    matrix = tuple(tuple(r) for r in (r_a, r_b, r_c, r_d, r_dp, r_f))
    rhs = (
        _ratio([0, 1], 1, M),
        _ratio([0, 1], 2, M),
        _ratio([0, 0, 1], 2, M),
        zero,
        zero,
        one,
    )
    return SeriesLinearSystem(matrix, rhs)


def _pick_pivot(rows: list[list[TruncatedSeries]], col: int) -> tuple[int, int]:
    """Row with the best pivot in ``col``: unit constant term, else any
    nonzero constant term, else the smallest valuation.  Returns (row, valuation)."""
    best = None
    for r in range(col, len(rows)):
        e = rows[r][col]
        v = e.valuation()
        if v is None:
            continue
        key = (v, 0 if e[v] in (1, -1) else 1)
        if best is None or key < best[0]:
            best = (key, r, v)
    if best is None:
        raise SeriesError(f"no usable pivot for unknown {UNKNOWNS[col]}")
    return best[1], best[2]


def solve_system(sys: SeriesLinearSystem, order: int | None = None) -> SolvedSeries:
    """Gaussian elimination over the truncated-series ring.

    A pivot with zero constant term costs its valuation in precision on every
    row it touches; the result order reflects any such loss.
    """
    n = len(sys.rhs)
    rows = [list(sys.matrix[i]) + [sys.rhs[i]] for i in range(n)]
    for col in range(n):
        r, v = _pick_pivot(rows, col)
        rows[col], rows[r] = rows[r], rows[col]
        piv = rows[col][col]
        for i in range(col + 1, n):
            e = rows[i][col]
            if e.valuation() is None:
                continue
            factor = div(e, piv)
            rows[i] = [a - factor * b for a, b in zip(rows[i], rows[col])]
    x: list[TruncatedSeries | None] = [None] * n
    for i in range(n - 1, -1, -1):
        acc = rows[i][n]
        for j in range(i + 1, n):
            acc = acc - rows[i][j] * x[j]
        x[i] = div(acc, rows[i][i])
    out = [s for s in x if s is not None]
    target = min(s.order for s in out) if order is None else order
    return SolvedSeries(*(s.truncate(target) for s in out))


def solve(N: int) -> SolvedSeries:
    """Build at order ``N + 2`` and report at order ``N``."""
    return solve_system(build_system(N + 2), N)


def residuals(sys: SeriesLinearSystem, solved: SolvedSeries) -> list[TruncatedSeries]:
    """``matrix @ x - rhs`` row by row (zero series when ``solved`` is exact)."""
    x = solved.as_list()
    out = []
    for row, b in zip(sys.matrix, sys.rhs):
        acc = -b
        for e, xi in zip(row, x):
            acc = acc + e * xi
        out.append(acc)
    return out


# ----------------------------------------------------------------------
# bivariate reconstructions


def _d_sums(N: int) -> tuple[BivariateSeries, BivariateSeries]:
    """The two bracketed sums of the unrolled ``D(u)`` equation at ``u = q t``."""
    sum_a = BivariateSeries.zero(N)
    sum_f = BivariateSeries.zero(N)
    # 1 / ((1-q)^i prod_{k<i} (1 - q^{k+1} t)^2)
    base = BivariateSeries.one(N)
    i = 1
    while exponent(i) <= N:
        base = base.div_one_minus(1, 0)
        if i > 1:
            base = base.div_one_minus(i, 1, 2)
        f_term = base.mul_monomial(exponent(i), i).div_one_minus(i + 1, 1)
        sum_f = sum_f + f_term
        sum_a = sum_a + f_term.div_one_minus(i + 1, 1)
        i += 1
    return sum_a, sum_f


def d_series(solved: SolvedSeries, N: int | None = None) -> BivariateSeries:
    """``D(q t)`` as a triangular series in ``q`` and ``t``."""
    N = solved.order if N is None else N
    if N > solved.order:
        raise SeriesError("solution order too small")
    sum_a, sum_f = _d_sums(N)
    return sum_a.mul_series(solved.A1) + sum_f.mul_series(solved.F)


def d_functional_residual(solved: SolvedSeries, D: BivariateSeries) -> BivariateSeries:
    """Residual of ``D(u) = q^2u/((1-q)(1-qu)^2) (A1 + D(qu)) + q^2u/((1-q)(1-qu)) F`` at ``u = q t``."""
    N = D.order
    a1 = solved.A1.truncate(N)
    f = solved.F.truncate(N)
    k2 = D.scale_t(1).mul_monomial(3, 1).div_one_minus(1, 0).div_one_minus(2, 1, 2)
    k1 = BivariateSeries.from_series(a1, 3, 1, N).div_one_minus(1, 0).div_one_minus(2, 1, 2)
    kf = BivariateSeries.from_series(f, 3, 1, N).div_one_minus(1, 0).div_one_minus(2, 1)
    return D - k1 - kf - k2


def assemble_A(solved: SolvedSeries, N: int | None = None, D: BivariateSeries | None = None) -> BivariateSeries:
    """``A(q, t)``: level-one figures by area and height of the last column."""
    N = solved.order if N is None else N
    if D is None:
        D = d_series(solved, N)
    a1, b1, c1 = (s.truncate(N) for s in (solved.A1, solved.B1, solved.C1))
    one = TruncatedSeries.one(N)
    fs = BivariateSeries.from_series
    total = fs(one, 1, 1, N).div_one_minus(1, 1)
    total = total + fs(a1, 1, 1, N).div_one_minus(1, 1, 2)
    total = total + fs(b1, 1, 1, N).div_one_minus(1, 1)
    total = total + fs(b1 - a1, 2, 3, N).div_one_minus(1, 1, 2)
    total = total + fs(c1, 2, 2, N).div_one_minus(1, 1, 2)
    total = total + fs(c1, 3, 4, N).scale(2).div_one_minus(1, 1, 3)
    total = total - D.mul_monomial(2, 3).scale(2).div_one_minus(1, 1, 3)
    return total


def part_series(solved: SolvedSeries, N: int | None = None) -> dict[ClassLabel, TruncatedSeries]:
    """Contribution of each of the eleven classes, at ``t = 1`` and ``u = v = 1``."""
    N = solved.order if N is None else N
    a1, b1, c1, dq = (s.truncate(N) for s in (solved.A1, solved.B1, solved.C1, solved.Dq))
    r = lambda coeffs, p: _ratio(coeffs, p, N)  # noqa: E731
    L = ClassLabel
    return {
        L.S_alpha: r([0, 1], 1),
        L.S_beta: r([0, 1], 2) * a1,
        L.S_gamma: r([0, 1], 1) * b1,
        L.S_delta: r([0, 0, 1], 2) * (b1 - a1),
        L.S_epsilon: r([0, 0, 1], 2) * c1,
        L.S_zeta: r([0, 0, 0, 2], 3) * c1 - r([0, 0, 2], 3) * dq,
        L.T_alpha: r([0, 0, 1], 2),
        L.T_beta: r([0, 0, 2], 2) * a1,
        L.T_gamma: r([0, 0, 2], 3) * a1,
        L.T_delta: r([0, 0, 2], 2) * c1,
        L.T_epsilon: r([0, 0, 2], 3) * dq,
    }
