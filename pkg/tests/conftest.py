from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import strategies as st

from pantograph_stm.series import PowerSeries, parse_series
from pantograph_stm.verify import example_problem

X = sympy.Symbol("x")

rationals = st.fractions(min_value=-1000, max_value=1000, max_denominator=50)


def series_of_degree(N: int):
    return st.lists(rationals, min_size=N + 1, max_size=N + 1).map(
        lambda cs: PowerSeries(tuple(Fraction(c) for c in cs))
    )


def S(text: str, N: int) -> PowerSeries:
    """Series from canonical text."""
    return parse_series(text, N)


def from_sympy(expr, N: int) -> PowerSeries:
    """Truncated Maclaurin coefficients of a sympy expression, as an independent reference."""
    poly = sympy.Poly(sympy.series(expr, X, 0, N + 1).removeO(), X) if expr.has(sympy.exp) else sympy.Poly(sympy.expand(expr), X)
    coeffs = [Fraction(0)] * (N + 1)
    for (k,), c in poly.terms():
        if k <= N:
            coeffs[k] = Fraction(int(c.p), int(c.q))
    return PowerSeries(tuple(coeffs))


@pytest.fixture(params=["example1", "example2", "example3", "example4"])
def example_name(request):
    return request.param


@pytest.fixture
def ex1():
    return example_problem("example1")


@pytest.fixture
def ex2():
    return example_problem("example2")


@pytest.fixture
def ex3():
    return example_problem("example3")


@pytest.fixture
def ex4():
    return example_problem("example4")
