from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from pantograph_stm.model import (
    Const,
    DelayedTerm,
    ExactSolution,
    ModelError,
    MonomialCoeff,
    Product,
    ProblemSpec,
    Sum,
    VideSpec,
    eval_expr,
    taylor_of_exact,
    vide_reduce,
)
from pantograph_stm.series import PowerSeries, delay_compose, differentiate

from conftest import X, S, from_sympy, series_of_degree

DELAYS = st.sampled_from([Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(1)])


def test_eval_example1_at_zero(ex1):
    assert eval_expr(ex1.rhs, PowerSeries.zero(16), 16) == PowerSeries.constant(2, 16)


def test_eval_example2_at_linear(ex2):
    y = S("1 + 1 x", 16)
    yx = 1 + X
    # y'(x/2) means d/dx[y(x/2)]
    yq = yx.subs(X, X / 2)
    expected = (sympy.Rational(8, 3) * sympy.diff(yq, X) * yx + 8 * X**2 * yq
                - sympy.Rational(4, 3) - sympy.Rational(22, 3) * X - 7 * X**2 - sympy.Rational(5, 3) * X**3)
    got = eval_expr(ex2.rhs, y, 16)
    assert got == from_sympy(expected, 16)
    assert got == S("-6 x + 1 x^2 + 7/3 x^3", 16)


def test_eval_example2_at_exact_solution(ex2):
    y = S("1 + 1 x + -1 x^3", 16)
    assert eval_expr(ex2.rhs, y, 16) == differentiate(differentiate(y))
    assert eval_expr(ex2.rhs, y, 16) == S("-6 x", 16)


def test_eval_example3_at_one(ex3):
    assert eval_expr(ex3.rhs, PowerSeries.constant(1, 16), 16) == S("2 x", 16)


def test_eval_rejects_wrong_degree(ex1):
    with pytest.raises(ModelError):
        eval_expr(ex1.rhs, PowerSeries.zero(3), 4)


def test_taylor_of_exact_examples():
    assert taylor_of_exact(ExactSolution.exp_of_polynomial([0, 1]), 4) == S("1 + 1 x + 1/2 x^2 + 1/6 x^3 + 1/24 x^4", 4)
    assert taylor_of_exact(ExactSolution.exp_of_polynomial([0, 0, 1]), 6) == S("1 + 1 x^2 + 1/2 x^4 + 1/6 x^6", 6)
    assert taylor_of_exact(ExactSolution.polynomial([1, 1, 0, -1]), 5) == S("1 + 1 x + -1 x^3", 5)


def test_taylor_of_exact_against_sympy():
    ex = ExactSolution.exp_of_polynomial([0, Fraction(1, 2), -3])
    assert taylor_of_exact(ex, 10) == from_sympy(sympy.exp(X / 2 - 3 * X**2), 10)


def test_exact_solution_evaluates():
    assert ExactSolution.exp_of_polynomial([0, 1])(1.0) == pytest.approx(2.718281828459045)
    assert ExactSolution.polynomial([1, 1, 0, -1])(2.0) == -5.0
    with pytest.raises(ModelError):
        ExactSolution.exp_of_polynomial([1, 1])


def test_vide_reduce_examples(ex4):
    assert ex4.order == 2
    assert ex4.rhs == DelayedTerm(0, Fraction(1, 2), 2)
    assert ex4.ics == (1, 1)

    r = vide_reduce(VideSpec(Const(0), DelayedTerm(), [Fraction(3, 5)]), 8)
    assert r.rhs == DelayedTerm() and r.ics == (Fraction(3, 5), 0)

    r = vide_reduce(VideSpec(MonomialCoeff(1), DelayedTerm(0, Fraction(1, 2), 2), [2]), 8)
    assert r.rhs == Sum((Const(1), DelayedTerm(0, Fraction(1, 2), 2)))
    assert r.ics == (2, 0)


def test_invalid_nodes_rejected():
    with pytest.raises(ModelError):
        DelayedTerm(0, Fraction(3, 2))
    with pytest.raises(ModelError):
        DelayedTerm(power=0)
    with pytest.raises(ModelError):
        Sum((Const(1),))
    with pytest.raises(ModelError):
        Product(())
    with pytest.raises(ModelError):
        ProblemSpec(1, DelayedTerm(1), [0])
    with pytest.raises(ModelError):
        ProblemSpec(2, Const(1), [0])
    with pytest.raises(ModelError):
        VideSpec(Const(1), DelayedTerm(1), [0])


N = 7


@given(series_of_degree(N))
@settings(max_examples=25, deadline=None)
def test_unit_delayed_term_is_identity(y):
    assert eval_expr(DelayedTerm(), y, N) == y


@given(series_of_degree(N), DELAYS)
@settings(max_examples=20, deadline=None)
def test_chain_rule(y, q):
    expected = delay_compose(differentiate(y), q).scale(q)
    assert eval_expr(DelayedTerm(1, q, 1), y, N) == expected


@given(series_of_degree(N), DELAYS, DELAYS, st.integers(0, 3), st.integers(1, 3))
@settings(max_examples=20, deadline=None)
def test_eval_is_a_homomorphism(y, q, r, m, p):
    a, b = DelayedTerm(0, q, p), Product((MonomialCoeff(m), DelayedTerm(1, r, 1)))
    ea, eb = eval_expr(a, y, N), eval_expr(b, y, N)
    assert eval_expr(Sum((a, b)), y, N) == ea + eb
    assert eval_expr(Product((a, b)), y, N) == ea * eb
