"""Exact enumeration and asymptotics of column-subconvex polyhexes."""

from .qseries import BivariateSeries, SeriesError, TruncatedSeries
from .interval import Interval
from .lattice import ClassLabel, Figure, classify, is_level_m_subconvex
from .closedform import a1_closed, eval_denominator, eval_numerator, theta_sums
from .temperley import build_system, solve, solve_system
from .enumeration import CoefficientTable, count_by_model, dp_count_subconvex, dp_solve
from .analysis import AnalysisReport, amplitude, growth_constant, locate_pole, lower_bound, ratio_extrapolate

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport",
    "BivariateSeries",
    "ClassLabel",
    "CoefficientTable",
    "Figure",
    "Interval",
    "SeriesError",
    "TruncatedSeries",
    "a1_closed",
    "amplitude",
    "build_system",
    "classify",
    "count_by_model",
    "dp_count_subconvex",
    "dp_solve",
    "eval_denominator",
    "eval_numerator",
    "growth_constant",
    "is_level_m_subconvex",
    "locate_pole",
    "lower_bound",
    "ratio_extrapolate",
    "solve",
    "solve_system",
    "theta_sums",
]
