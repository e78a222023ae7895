"""Dominant singularity, growth constant, amplitude and rigorous bounds.

Where a denominator is available its zero is bracketed by certified
bisection; otherwise the growth constant comes from Aitken-accelerated
ratios ``a_{n+1}/a_n``.  The rigorous lower bound ``max a_n^{1/n}`` is exact
integer arithmetic rounded down.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from mpmath import MPContext

from .interval import Interval, as_fraction, ceil_decimal, floor_decimal

Evaluator = Callable[[Fraction, int], Interval]


class AnalysisError(ArithmeticError):
    pass


class NoSignChangeError(AnalysisError):
    pass


class PrecisionCapError(AnalysisError):
    def __init__(self, message: str, best: Interval):
        super().__init__(message)
        self.best = best


def _counts(table) -> list[int]:
    """Accept a CoefficientTable, a TruncatedSeries or a plain list of a_1, a_2, ..."""
    if hasattr(table, "counts"):
        return list(table.counts)
    if hasattr(table, "coeffs"):
        return [int(c) for c in table.coeffs[1:]]
    return [int(c) for c in table]


def _ctx(bits: int = 256) -> MPContext:
    ctx = MPContext()
    ctx.prec = bits
    return ctx


# ----------------------------------------------------------------------
# pole location


def _certified_sign(evaluator: Evaluator, x: Fraction, bits: int, max_bits: int) -> tuple[int, int]:
    while True:
        s = evaluator(x, bits).sign()
        if s != 0:
            return s, bits
        if bits >= max_bits:
            return 0, bits
        bits = min(2 * bits, max_bits)


def locate_pole(
    evaluator: Evaluator,
    bracket: tuple,
    target_width,
    start_bits: int = 64,
    max_bits: int = 1024,
) -> Interval:
    """Bisect a certified sign change down to ``target_width``.

    ``evaluator(x, bits)`` must return an :class:`Interval` enclosing the
    function value at ``x``.  When an enclosure touches zero the precision is
    doubled before trusting the sign.
    """
    lo, hi = (as_fraction(b) for b in bracket)
    target = as_fraction(target_width)
    if not lo < hi:
        raise ValueError("bracket must satisfy lo < hi")
    s_lo, bits = _certified_sign(evaluator, lo, start_bits, max_bits)
    s_hi, bits = _certified_sign(evaluator, hi, bits, max_bits)
    if s_lo == 0 or s_hi == 0:
        raise PrecisionCapError("sign at a bracket end is undetermined", Interval(lo, hi))
    if s_lo == s_hi:
        raise NoSignChangeError(f"no certified sign change on [{float(lo)}, {float(hi)}]")
    while hi - lo > target:
        mid = (lo + hi) / 2
        s, bits = _certified_sign(evaluator, mid, bits, max_bits)
        if s == 0:
            raise PrecisionCapError(
                f"precision cap {max_bits} bits reached", Interval(lo, hi)
            )
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    return Interval(lo, hi)


def denominator_evaluator(x: Fraction, bits: int) -> Interval:
    from .closedform import eval_denominator

    return eval_denominator(x, bits)


def locate_level1_pole(target_width=Fraction(1, 10**11), bracket=(Fraction(1, 5), Fraction(3, 10))) -> Interval:
    return locate_pole(denominator_evaluator, bracket, target_width)


# ----------------------------------------------------------------------
# constants


def growth_constant(q_c: Interval) -> Interval:
    """``tau = 1 / q_c`` with the ends swapped."""
    if q_c.lo <= 0:
        raise ValueError("q_c must be positive")
    return q_c.reciprocal()


def _iroot_floor(x: int, n: int) -> int:
    """Largest integer ``k`` with ``k**n <= x``."""
    if x < 0:
        raise ValueError("negative radicand")
    if x < 2:
        return x
    k = int(math.exp(math.log(x) / n)) if x.bit_length() < 1000 else int(
        2 ** (x.bit_length() / n)
    )
    k = max(k, 1)
    # Newton from above converges to the floor
    k = max(k, 1) * 2
    while True:
        nk = ((n - 1) * k + x // k ** (n - 1)) // n
        if nk >= k:
            break
        k = nk
    while k**n > x:
        k -= 1
    while (k + 1) ** n <= x:
        k += 1
    return k


def nth_root_floor(a: int, n: int, digits: int = 12) -> Fraction:
    """``a^(1/n)`` rounded down to ``digits`` decimals, exactly."""
    scale = 10**digits
    return Fraction(_iroot_floor(a * scale**n, n), scale)


def lower_bound(table, digits: int = 12) -> tuple[Fraction, int]:
    """``max_n a_n^{1/n}`` rounded down, with the witnessing ``n``."""
    a = _counts(table)
    if not a:
        raise AnalysisError("empty table")
    best, best_n = Fraction(0), 0
    for n, an in enumerate(a, start=1):
        if an <= 0:
            continue
        r = nth_root_floor(an, n, digits)
        if r > best:
            best, best_n = r, n
    return best, best_n


def _aitken(x0, x1, x2):
    den = (x2 - x1) - (x1 - x0)
    if den == 0:
        return x2
    return x2 - (x2 - x1) ** 2 / den


def amplitude(table, tau, min_terms: int = 20, bits: int = 256) -> tuple[float, str]:
    """Estimate ``c`` in ``a_n ~ c tau^n`` from the last terms.

    Returns ``(estimate, method)``.  Aitken's extrapolation of ``a_n / tau^n``
    is used unless its correction is larger than the last step of the raw
    sequence, in which case the plain quotient at the largest ``n`` is kept.
    """
    a = _counts(table)
    if len(a) < min_terms:
        raise AnalysisError(f"amplitude needs at least {min_terms} terms, got {len(a)}")
    ctx = _ctx(bits)
    if isinstance(tau, Interval):
        t = ctx.mpf(tau.mid.numerator) / tau.mid.denominator
    else:
        tf = as_fraction(tau) if not isinstance(tau, float) else Fraction(tau)
        t = ctx.mpf(tf.numerator) / tf.denominator
    N = len(a)
    c = [ctx.mpf(a[n - 1]) / t**n for n in (N - 2, N - 1, N)]
    acc = _aitken(*c)
    if abs(acc - c[2]) <= abs(c[2] - c[1]) or c[2] == c[1]:
        return float(acc), f"aitken(a_n/tau^n, n={N - 2}..{N})"
    return float(c[2]), f"quotient(a_n/tau^n, n={N})"


def ratio_table(table) -> list[tuple[int, float]]:
    a = _counts(table)
    return [(n, a[n] / a[n - 1]) for n in range(1, len(a)) if a[n - 1]]


def ratio_extrapolate(table, min_terms: int = 15, bits: int = 256) -> tuple[float, float]:
    """Aitken-accelerated limit of ``a_{n+1}/a_n``.

    Returns ``(estimate, spread)`` where ``spread`` is the range of the last
    three accelerated values.
    """
    a = _counts(table)
    if len(a) < min_terms:
        raise AnalysisError(f"ratio extrapolation needs at least {min_terms} terms, got {len(a)}")
    ctx = _ctx(bits)
    r = [ctx.mpf(a[n]) / a[n - 1] for n in range(1, len(a))]
    acc = [_aitken(r[k - 2], r[k - 1], r[k]) for k in range(2, len(r))]
    last = acc[-3:]
    return float(acc[-1]), float(max(last) - min(last))


# ----------------------------------------------------------------------
# reports


@dataclass
class AnalysisReport:
    model: str
    terms_used: int
    q_c: Interval | None = None
    tau: Interval | None = None
    tau_estimate: float | None = None
    tau_spread: float | None = None
    amplitude: float | None = None
    amplitude_method: str = ""
    lower_bound: Fraction | None = None
    lower_bound_n: int | None = None
    ratio_table: list[tuple[int, float]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def to_dict(self, digits: int = 15) -> dict:
        out: dict = {"model": self.model, "terms_used": self.terms_used}
        if self.q_c is not None:
            out["q_c"] = self.q_c.to_json(digits)
            out["tau"] = self.tau.to_json(digits)
            out["tau_method"] = "certified bisection on the denominator"
        if self.tau_estimate is not None:
            out["tau_estimate"] = f"{self.tau_estimate:.{min(digits, 15)}f}"
            out["tau_spread"] = f"{self.tau_spread:.3e}"
            out["tau_estimate_method"] = "aitken(ratios)"
        if self.amplitude is not None:
            out["amplitude"] = f"{self.amplitude:.{min(digits, 15)}f}"
            out["amplitude_method"] = self.amplitude_method
        if self.lower_bound is not None:
            out["lower_bound"] = floor_decimal(self.lower_bound, min(digits, 12))
            out["lower_bound_n"] = self.lower_bound_n
        out["ratio_table"] = [[n, f"{r:.12f}"] for n, r in self.ratio_table]
        out["notes"] = list(self.notes)
        return out


def analyze(
    table,
    model: str,
    q_c: Interval | None = None,
    amplitude_tau: Interval | None = None,
) -> AnalysisReport:
    """Analysis of a coefficient table, with a certified ``q_c`` if one is known.

    ``amplitude_tau`` may carry a tighter enclosure of ``tau`` than the
    reported one; it only feeds the amplitude estimate.
    """
    a = _counts(table)
    rep = AnalysisReport(model=model, terms_used=len(a))
    rep.ratio_table = ratio_table(a)
    rep.lower_bound, rep.lower_bound_n = lower_bound(a)
    tau_for_amp = None
    if q_c is not None:
        rep.q_c = q_c
        rep.tau = growth_constant(q_c)
        tau_for_amp = amplitude_tau or rep.tau
        if rep.lower_bound > rep.tau.lo:
            raise AnalysisError("lower bound exceeds the certified growth constant")
    if len(a) >= 15:
        rep.tau_estimate, rep.tau_spread = ratio_extrapolate(a)
        if tau_for_amp is None:
            tau_for_amp = rep.tau_estimate
    else:
        rep.notes.append("fewer than 15 terms: no ratio extrapolation")
    if tau_for_amp is not None and len(a) >= 20:
        rep.amplitude, rep.amplitude_method = amplitude(a, tau_for_amp)
    else:
        rep.notes.append("fewer than 20 terms or no growth constant: amplitude not estimated")
    return rep


def analyze_level1(order: int = 250, target_width=Fraction(1, 10**11)) -> AnalysisReport:
    """Closed-form pipeline: exact series, certified pole, bound, amplitude."""
    from .closedform import a1_closed

    series = a1_closed(order)
    q_c = locate_level1_pole(target_width)
    fine = locate_level1_pole(Fraction(1, 10**40))
    rep = analyze(series, "l1", q_c=q_c, amplitude_tau=growth_constant(fine))
    return rep


def format_interval(iv: Interval, digits: int = 12) -> str:
    return f"[{floor_decimal(iv.lo, digits)}, {ceil_decimal(iv.hi, digits)}]"
