"""Power-series solutions of pantograph delay differential equations and
Volterra integro-differential equations by Sumudu-transform variational
iteration, in exact rational arithmetic."""

from .model import ExactSolution, ProblemSpec, VideSpec, eval_expr, taylor_of_exact, vide_reduce
from .parser import ParseError, parse_expr, parse_problem, serialize
from .series import PowerSeries, format_series, parse_series
from .solver import Grid, Mode, SolveOptions, SolveResult, solve, stm_step

__all__ = [
    "ExactSolution",
    "Grid",
    "Mode",
    "ParseError",
    "PowerSeries",
    "ProblemSpec",
    "SolveOptions",
    "SolveResult",
    "VideSpec",
    "eval_expr",
    "format_series",
    "parse_expr",
    "parse_problem",
    "parse_series",
    "serialize",
    "solve",
    "stm_step",
    "taylor_of_exact",
    "vide_reduce",
]
