from __future__ import annotations

import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from pantograph_stm.series import (
    DegreeMismatchError,
    DelayRangeError,
    PowerSeries,
    add,
    delay_compose,
    differentiate,
    evaluate,
    format_series,
    integrate,
    lowest_new_degree,
    multiply,
    parse_series,
    pow_int,
)

from conftest import X, S, from_sympy, series_of_degree


def test_add_examples():
    assert add(S("1 + 1 x", 3), S("-1 x", 3)) == S("1", 3)
    assert add(S("1 + 1 x", 5), S("-1 x^3", 5)) == S("1 + 1 x + -1 x^3", 5)
    s = S("1/2 + -3 x^2", 4)
    assert add(s, PowerSeries.zero(4)) == s


def test_binary_ops_reject_degree_mismatch():
    with pytest.raises(DegreeMismatchError):
        add(PowerSeries.zero(2), PowerSeries.zero(3))
    with pytest.raises(DegreeMismatchError):
        multiply(PowerSeries.zero(2), PowerSeries.zero(3))


def test_multiply_examples():
    assert multiply(S("1 + 1 x", 2), S("1 + -1 x", 2)) == S("1 + -1 x^2", 2)
    a = S("1 + 1/2 x + 1/8 x^2", 2)
    expected = from_sympy((1 + X / 2 + X**2 / 8) ** 2, 2)
    assert expected == S("1 + 1 x + 1/2 x^2", 2)
    assert multiply(a, a) == expected
    assert multiply(S("1 x^2", 2), S("1 x", 2)).is_zero()


def test_pow_int_examples():
    assert pow_int(S("1 + 1/4 x^2", 2), 4) == S("1 + 1 x^2", 2)
    s = S("3 + -2/7 x", 3)
    assert pow_int(s, 1) == s
    assert pow_int(S("1 + 1/2 x", 2), 2) == from_sympy((1 + X / 2) ** 2, 2)


def test_differentiate_examples():
    assert differentiate(S("1 x^2", 4)) == S("2 x", 4)
    assert differentiate(S("1 + 1 x + -1 x^3", 5)) == from_sympy(sympy.diff(1 + X - X**3, X), 5)
    assert differentiate(S("5/3", 3)).is_zero()
    assert differentiate(S("1 x^4", 4)).trunc_degree == 4


def test_integrate_examples():
    assert integrate(S("2", 4), 2) == S("1 x^2", 4)
    assert integrate(S("-6 x", 5), 2) == S("-1 x^3", 5)
    assert integrate(S("2 x", 4), 1) == S("1 x^2", 4)
    # terms pushed past N are dropped
    assert integrate(S("1 x^3", 4), 2) == PowerSeries.zero(4)


def test_integrate_against_sympy():
    s = S("1/3 + -2 x + 5/7 x^3", 9)
    expected = sympy.integrate(sympy.integrate(sympy.Rational(1, 3) - 2 * X + sympy.Rational(5, 7) * X**3, X), X)
    assert integrate(s, 2) == from_sympy(expected, 9)


def test_delay_compose_examples():
    assert delay_compose(S("1 + 1 x", 3), Fraction(1, 2)) == S("1 + 1/2 x", 3)
    s = S("4 + 1/3 x^2", 3)
    assert delay_compose(s, 1) == s
    assert delay_compose(S("1 x^2", 2), Fraction(1, 2)) == S("1/4 x^2", 2)


@pytest.mark.parametrize("q", [Fraction(0), Fraction(-1, 2), Fraction(3, 2)])
def test_delay_out_of_range(q):
    with pytest.raises(DelayRangeError):
        delay_compose(S("1", 2), q)


def test_lowest_new_degree_examples():
    assert lowest_new_degree(S("1 + 1 x", 5), S("1 + 1 x + -1 x^3 + 1/12 x^4", 5)) == 3
    assert lowest_new_degree(S("1", 4), S("1 + 1 x^2", 4)) == 2
    s = S("1 + 1 x^2", 4)
    assert lowest_new_degree(s, s) is None
    assert lowest_new_degree(PowerSeries.zero(3), S("1 x^2", 3)) == 2


def test_evaluate_examples():
    assert evaluate(S("1 x^2", 2), 3.0) == 9.0
    assert evaluate(S("1 + 1 x + -1 x^3", 3), 1.0) == 1.0
    assert evaluate(PowerSeries.zero(5), 0.37) == 0.0


def test_canonical_text():
    s = S("1 + 1 x + -1 x^3 + 1/12 x^4", 6)
    assert format_series(s) == "1 + 1 x + -1 x^3 + 1/12 x^4"
    assert format_series(PowerSeries.zero(3)) == "0"
    assert format_series(S("7/60 x^5", 5)) == "7/60 x^5"


def test_float_coefficients_rejected():
    with pytest.raises(TypeError):
        PowerSeries.from_coeffs([0.5])


# properties

N = 6


@given(series_of_degree(N), series_of_degree(N), series_of_degree(N))
@settings(max_examples=20, deadline=None)
def test_ring_laws(a, b, c):
    assert add(a, b) == add(b, a)
    assert add(add(a, b), c) == add(a, add(b, c))
    assert multiply(a, b) == multiply(b, a)
    assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))
    assert multiply(a, add(b, c)) == add(multiply(a, b), multiply(a, c))


@given(series_of_degree(N))
@settings(max_examples=20, deadline=None)
def test_differentiate_undoes_integrate(a):
    assert differentiate(integrate(a, 1)).truncate(N - 1) == a.truncate(N - 1)


@given(series_of_degree(N), st.sampled_from([Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(1)]),
       st.sampled_from([Fraction(1, 5), Fraction(1, 2), Fraction(1)]))
@settings(max_examples=20, deadline=None)
def test_delay_composition_laws(a, q, r):
    assert delay_compose(delay_compose(a, q), r) == delay_compose(a, q * r)
    assert delay_compose(a, 1) == a


@given(series_of_degree(4), st.integers(min_value=1, max_value=5))
@settings(max_examples=25, deadline=None)
def test_pow_matches_repeated_multiply(a, p):
    expected = a
    for _ in range(p - 1):
        expected = multiply(expected, a)
    assert pow_int(a, p) == expected


@given(series_of_degree(N), series_of_degree(N), st.floats(min_value=-1, max_value=1))
@settings(max_examples=20, deadline=None)
def test_evaluate_is_a_homomorphism(a, b, x):
    for exact, approx in (
        (evaluate(add(a, b), x), evaluate(a, x) + evaluate(b, x)),
    ):
        assert math.isclose(exact, approx, rel_tol=1e-12, abs_tol=1e-9)
    # product agrees up to the truncated tail, so compare on the full-degree product
    full = 2 * N
    ae, be = a.truncate(full), b.truncate(full)
    assert math.isclose(evaluate(multiply(ae, be), x), evaluate(a, x) * evaluate(b, x), rel_tol=1e-12, abs_tol=1e-9)


@given(series_of_degree(N))
@settings(max_examples=20, deadline=None)
def test_text_round_trip(a):
    assert parse_series(format_series(a), N) == a
