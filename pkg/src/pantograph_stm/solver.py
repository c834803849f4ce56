"""Sumudu-transform variational iteration for canonical problems.

Each step computes ``y_{k+1} = y_1 + S^-1[u^n S[rhs(y_k)]]``.  In paper mode
every step keeps only the lowest new term above the previous iterate, the
way hand computations discard higher-order terms.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .model import ExactSolution, ProblemSpec, eval_expr
from .series import PowerSeries, RationalLike, differentiate, evaluate, lowest_new_degree
from .sumudu import (
    USeries,
    apply_multiplier,
    forward,
    inverse,
    lagrange_multiplier,
    nth_derivative_image,
)


class Mode(str, enum.Enum):
    FULL = "full"
    PAPER = "paper"


@dataclass(frozen=True)
class Grid:
    """Evaluation points ``start, start + step, ...`` up to ``end``, held exactly."""

    start: Fraction = Fraction(0)
    end: Fraction = Fraction(1)
    step: Fraction = Fraction(1, 100)

    def __post_init__(self) -> None:
        for name in ("start", "end", "step"):
            value = getattr(self, name)
            if isinstance(value, float):
                value = Fraction(str(value))
            object.__setattr__(self, name, Fraction(value))
        if self.step <= 0:
            raise ValueError("grid step must be positive")
        if self.start >= self.end:
            raise ValueError("grid start must be below its end")

    @classmethod
    def parse(cls, text: str) -> Grid:
        """Read ``a:b:step`` with decimal or rational parts."""
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid must look like start:end:step, got {text!r}")
        try:
            start, end, step = (Fraction(p.strip()) for p in parts)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad grid {text!r}: {exc}") from None
        return cls(start, end, step)

    def __len__(self) -> int:
        return math.floor((self.end - self.start) / self.step) + 1

    def points(self) -> list[float]:
        return [float(self.start + i * self.step) for i in range(len(self))]

    def __str__(self) -> str:
        return f"{self.start}:{self.end}:{self.step}"


@dataclass(frozen=True)
class SolveOptions:
    mode: Mode = Mode.FULL
    max_iters: int = 16
    trunc_degree: int = 16
    grid: Grid = field(default_factory=Grid)

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")
        if self.trunc_degree < 1:
            raise ValueError("truncation degree must be positive")


@dataclass(frozen=True)
class StepInfo:
    index: int
    new_degree: Optional[int]
    degree: Optional[int]


@dataclass
class SolveResult:
    iterates: list[PowerSeries]
    converged: bool
    fixed_point_at: Optional[int]
    residual_max: float
    error_max: Optional[float]
    steps: list[StepInfo]
    residual_series: PowerSeries

    @property
    def final(self) -> PowerSeries:
        return self.iterates[-1]


def initial_approximation(ics: Sequence[RationalLike], N: int) -> PowerSeries:
    """Taylor polynomial built from ``y^(k)(0) = ics[k]``."""
    coeffs = [Fraction(c) / math.factorial(k) for k, c in enumerate(ics)]
    return PowerSeries.from_coeffs(coeffs, N)


def stm_step(spec: ProblemSpec, y: PowerSeries, N: int) -> PowerSeries:
    if y.trunc_degree != N:
        raise ValueError(f"iterate has truncation degree {y.trunc_degree}, expected {N}")
    if N < spec.order:
        raise ValueError(f"truncation degree {N} is below the equation order {spec.order}")
    phi = lagrange_multiplier(spec.order)
    image = forward(eval_expr(spec.rhs, y, N))
    correction = inverse(apply_multiplier(image, -phi))
    return initial_approximation(spec.ics, N) + correction


def correction_functional_step(spec: ProblemSpec, y: PowerSeries, N: int) -> PowerSeries:
    """One step of ``Y + phi(u) (Y/u^n - sum u^(k-n) y^(k)(0) - S[rhs])``, unsimplified.

    Mathematically identical to :func:`stm_step`; kept as a cross-check that
    the simplification to ``y_1 + S^-1[u^n S[rhs]]`` is exact.
    """
    n = spec.order
    phi = lagrange_multiplier(n)
    Y = forward(y)
    derivative = nth_derivative_image(Y, spec.ics, n)
    rhs_image = forward(eval_expr(spec.rhs, y, N))
    bracket = USeries.from_coeffs(
        [d - r for d, r in zip(derivative.coeffs, rhs_image.coeffs)], N
    )
    # bracket is only known through u^(N-n); the tail above is dropped by the shift
    update = apply_multiplier(bracket, phi)
    return inverse(USeries(tuple(a + b for a, b in zip(Y.coeffs, update.coeffs))))


def paper_truncate(prev: PowerSeries, next_: PowerSeries) -> PowerSeries:
    """Keep ``next_`` only through its lowest new degree above ``prev``."""
    k = lowest_new_degree(prev, next_)
    if k is None:
        return next_
    return PowerSeries.from_coeffs(next_.coeffs[: k + 1], next_.trunc_degree)


def residual(
    spec: ProblemSpec, y: PowerSeries, grid: Optional[Grid] = None
) -> tuple[PowerSeries, float]:
    """``y^(n) - rhs(y)`` through degree ``N - n`` and its max magnitude on ``grid``."""
    grid = grid or Grid()
    N = y.trunc_degree
    n = spec.order
    lhs = y
    for _ in range(n):
        lhs = differentiate(lhs)
    series = (lhs - eval_expr(spec.rhs, y, N)).truncate(max(N - n, 0))
    worst = max(abs(evaluate(series, x)) for x in grid.points())
    return series, worst


def compare_exact(y: PowerSeries, ex: ExactSolution, grid: Optional[Grid] = None) -> float:
    grid = grid or Grid()
    return max(abs(evaluate(y, x) - ex(x)) for x in grid.points())


def solve(spec: ProblemSpec, opts: Optional[SolveOptions] = None) -> SolveResult:
    opts = opts or SolveOptions()
    N = opts.trunc_degree
    if N < spec.order:
        raise ValueError(f"truncation degree {N} is below the equation order {spec.order}")
    y = initial_approximation(spec.ics, N)
    iterates = [y]
    steps = [StepInfo(1, None, y.degree())]
    converged = False
    fixed_point_at = None
    while len(iterates) < opts.max_iters:
        candidate = stm_step(spec, y, N)
        new_degree = lowest_new_degree(y, candidate)
        nxt = candidate if opts.mode is Mode.FULL else paper_truncate(y, candidate)
        iterates.append(nxt)
        steps.append(StepInfo(len(iterates), new_degree, nxt.degree()))
        if nxt == y:
            converged = True
            fixed_point_at = len(iterates) - 1
            break
        if opts.mode is Mode.PAPER:
            if new_degree is None:
                break
            if new_degree >= N:
                # any further term would land above the degree budget
                converged = True
                break
        y = nxt

    series, res_max = residual(spec, iterates[-1], opts.grid)
    err = compare_exact(iterates[-1], spec.exact, opts.grid) if spec.exact else None
    return SolveResult(
        iterates=iterates,
        converged=converged,
        fixed_point_at=fixed_point_at,
        residual_max=res_max,
        error_max=err,
        steps=steps,
        residual_series=series,
    )
