"""Sumudu transform on truncated polynomial series.

``G(u) = S[g](u) = integral_0^inf g(u x) exp(-x) dx`` sends ``x^k`` to
``k! u^k``, so on a truncated series the transform is a coefficient rule.
The quadrature realisation of the integral lives in :mod:`.oracle`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .series import PowerSeries, RationalLike, SeriesError


class InconsistentInitialConditions(SeriesError):
    pass


@dataclass(frozen=True)
class USeries:
    """Truncated series in the transform variable ``u``."""

    coeffs: tuple[Fraction, ...]

    @classmethod
    def from_coeffs(
        cls, coeffs: Iterable[RationalLike], trunc_degree: Optional[int] = None
    ) -> USeries:
        values = [Fraction(c) for c in coeffs]
        if trunc_degree is None:
            trunc_degree = max(len(values) - 1, 0)
        values = values[: trunc_degree + 1]
        values += [Fraction(0)] * (trunc_degree + 1 - len(values))
        return cls(tuple(values))

    @property
    def trunc_degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k]


@dataclass(frozen=True)
class UMonomialMultiplier:
    """The function ``sign * u**power``."""

    sign: int
    power: int

    def __post_init__(self) -> None:
        if self.sign not in (-1, 1):
            raise ValueError(f"sign must be -1 or +1, got {self.sign}")
        if self.power < 0:
            raise ValueError(f"power must be non-negative, got {self.power}")

    def __neg__(self) -> UMonomialMultiplier:
        return UMonomialMultiplier(-self.sign, self.power)

    def divided_by_u_power(self, n: int) -> Fraction:
        """Coefficient of ``phi(u) / u^n`` when ``power == n``."""
        if self.power != n:
            raise ValueError("phi(u) / u^n is only constant when power == n")
        return Fraction(self.sign)


def forward(g: PowerSeries) -> USeries:
    return USeries(tuple(math.factorial(k) * a for k, a in enumerate(g.coeffs)))


def inverse(G: USeries) -> PowerSeries:
    return PowerSeries(tuple(b / math.factorial(k) for k, b in enumerate(G.coeffs)))


def nth_derivative_image(G: USeries, ics: Sequence[RationalLike], n: int) -> USeries:
    """Image of the n-th derivative: ``(G(u) - sum_k u^k g^(k)(0)) / u^n``.

    The result has truncation degree ``N - n``.  The first ``n`` coefficients
    of the bracket must cancel, otherwise ``ics`` do not belong to ``G``.
    """
    if n < 1:
        raise ValueError(f"derivative order must be positive, got {n}")
    if len(ics) != n:
        raise ValueError(f"expected {n} initial values, got {len(ics)}")
    if n > G.trunc_degree:
        raise ValueError(f"derivative order {n} exceeds truncation degree {G.trunc_degree}")
    bracket = list(G.coeffs)
    for k, value in enumerate(ics):
        bracket[k] -= Fraction(value)
    for k in range(n):
        if bracket[k]:
            raise InconsistentInitialConditions(
                f"initial value for derivative {k} disagrees with the series "
                f"(residue {bracket[k]} at u^{k})"
            )
    return USeries(tuple(bracket[n:]))


def lagrange_multiplier(n: int) -> UMonomialMultiplier:
    """Stationary multiplier ``phi(u) = -u^n`` for an order-``n`` equation.

    Varying the correction functional with the nonlinear and delayed terms
    restricted leaves ``dY_{k+1} = dY_k (1 + phi(u) / u^n)``, which vanishes
    exactly for ``phi = -u^n``.
    """
    if n < 1:
        raise ValueError(f"equation order must be positive, got {n}")
    return UMonomialMultiplier(sign=-1, power=n)


def apply_multiplier(G: USeries, m: UMonomialMultiplier) -> USeries:
    """Multiply by ``sign * u^power`` and drop terms past the truncation degree."""
    N = G.trunc_degree
    shifted = [Fraction(0)] * min(m.power, N + 1)
    shifted += [m.sign * b for b in G.coeffs[: max(N + 1 - m.power, 0)]]
    return USeries(tuple(shifted))
