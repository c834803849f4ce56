from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pantograph_stm.fuzz import random_spec
from pantograph_stm.model import Const, DelayedTerm, MonomialCoeff, ProblemSpec, Product, Sum, VideSpec
from pantograph_stm.parser import ErrorKind, ParseError, parse_expr, parse_problem, serialize
from pantograph_stm.solver import SolveOptions, solve
from pantograph_stm.verify import EXAMPLES, load_example

EX1 = 'order=2; lhs="y\'\'(x)"; rhs="8*y(x/2) - x*y\'(x) + 2"; ic=[0,0]'
EX3 = 'order=1; lhs="y\'(x)"; rhs="2*x*y(x/2)^4"; ic=[1]'


def kind_of(text):
    with pytest.raises(ParseError) as info:
        parse_problem(text)
    return info.value.kind


def test_parse_example1_inline():
    spec = parse_problem(EX1)
    assert spec.order == 2 and spec.ics == (0, 0)
    assert spec.rhs == Sum((
        Product((Const(8), DelayedTerm(0, Fraction(1, 2)))),
        Product((Const(-1), MonomialCoeff(1), DelayedTerm(1))),
        Const(2),
    ))
    assert spec.rhs == load_example("example1").rhs


def test_parse_example3_inline():
    spec = parse_problem(EX3)
    assert spec.order == 1 and spec.ics == (1,)
    assert spec.rhs == Product((Const(2), MonomialCoeff(1), DelayedTerm(0, Fraction(1, 2), 4)))


def test_parse_expr_examples():
    assert parse_expr("(8/3)*y'(x/2)*y(x)") == Product(
        (Const(Fraction(8, 3)), DelayedTerm(1, Fraction(1, 2), 1), DelayedTerm(0, 1, 1)))
    assert parse_expr("y(x/1)") == DelayedTerm(0, 1, 1)
    assert parse_expr("y((1/2)*x)") == parse_expr("y(x/2)") == parse_expr("y(1/2*x)")
    assert parse_expr("- x^2") == Product((Const(-1), MonomialCoeff(2)))


def test_malformed_examples():
    assert kind_of(EX1.replace("[0,0]", "[0,0,0]")) is ErrorKind.MISSING_FIELD
    with pytest.raises(ParseError) as info:
        parse_expr("y(2*x)")
    assert info.value.kind is ErrorKind.DELAY_OUT_OF_RANGE
    assert kind_of(EX3 + "; ic=[2]") is ErrorKind.DUPLICATE_FIELD


def test_error_kinds_and_spans():
    assert kind_of('order=1; lhs="y\'(x)"; ic=[1]') is ErrorKind.MISSING_FIELD
    assert kind_of('order=1; lhs="y\'(x)"; rhs="y\'(x)"; ic=[1]') is ErrorKind.DERIVATIVE_ORDER_TOO_HIGH
    assert kind_of('order=1; lhs="y\'(x)"; rhs="3/0"; ic=[1]') is ErrorKind.BAD_RATIONAL
    assert kind_of('order=1; lhs="y\'(x)"; rhs="x +"; ic=[1]') is ErrorKind.UNEXPECTED_TOKEN
    text = 'order = 1\nlhs = "y\'(x)"\nrhs = "y(3*x)"\nic = [1]\n'
    with pytest.raises(ParseError) as info:
        parse_problem(text)
    err = info.value
    assert err.kind is ErrorKind.DELAY_OUT_OF_RANGE
    assert err.span.line == 3
    line = text.splitlines()[2]
    assert "3" in line[err.span.column - 1: err.span.column - 1 + err.span.length]
    assert str(err).startswith("3:")


def test_lhs_extra_terms_move_to_rhs():
    general = parse_problem('order=2; lhs="y\'\'(x) - 8*y(x/2) + x*y\'(x)"; rhs="2"; ic=[0,0]')
    r = solve(general, SolveOptions(trunc_degree=8))
    assert str(r.final) == "1 x^2" and r.fixed_point_at == 2


def test_comments_and_whitespace():
    text = "# header\n" + EX3.replace(";", " ;  # note\n")
    assert parse_problem(text) == parse_problem(EX3)


@pytest.mark.parametrize("name", EXAMPLES)
def test_example_files_round_trip(name):
    spec = load_example(name)
    text = serialize(spec)
    assert parse_problem(text) == spec
    assert serialize(parse_problem(text)) == text


def test_vide_round_trip():
    spec = load_example("example4")
    assert isinstance(spec, VideSpec) and spec.forcing == Const(1)
    assert parse_problem(serialize(spec)) == spec


def test_fuzzed_specs_round_trip():
    rng = random.Random(11)
    for _ in range(300):
        spec = random_spec(rng)
        assert parse_problem(serialize(spec)) == spec


@given(st.integers(-10**6, 10**6), st.integers(1, 10**6))
@settings(max_examples=100, deadline=None)
def test_rational_literals_are_exact(p, q):
    text = f"{p}/{q}" if p >= 0 else f"-{-p}/{q}"
    e = parse_expr(text)
    value = e.value if isinstance(e, Const) else e.children[0].value
    assert value == Fraction(p, q)
    spec = parse_problem(f'order=1; lhs="y\'(x)"; rhs="{text}*y(x)"; ic=[{p}/{q}]')
    assert spec.ics == (Fraction(p, q),)


def _check_span(err, text):
    lines = text.split("\n")
    assert 1 <= err.span.line <= len(lines)
    assert 1 <= err.span.column <= max(len(lines[err.span.line - 1]), 0) + 1
    assert err.span.length >= 1


@given(st.binary(max_size=200))
@settings(max_examples=200, deadline=None)
def test_random_bytes_only_raise_parse_error(data):
    try:
        parse_problem(data)
    except ParseError as err:
        try:
            _check_span(err, data.decode("utf-8"))
        except UnicodeDecodeError:
            pass


@given(st.text(alphabet="xyt'()^*/+-0123456789 =;[]\"#\norderlhsic", max_size=120))
@settings(max_examples=300, deadline=None)
def test_dsl_like_text_only_raises_parse_error(text):
    try:
        parse_problem(text)
    except ParseError as err:
        _check_span(err, text)


def test_mutated_example_files_only_raise_parse_error():
    rng = random.Random(5)
    sources = [serialize(load_example(n)) for n in EXAMPLES]
    for _ in range(2000):
        text = list(rng.choice(sources))
        for _ in range(rng.randint(1, 4)):
            i = rng.randrange(len(text))
            op = rng.random()
            if op < 0.4:
                del text[i]
            elif op < 0.8:
                text.insert(i, rng.choice("xy'()^*/+-0129 =;[]\""))
            else:
                text[i] = rng.choice("xy'()^*/+-0129 =;[]\"")
        text = "".join(text)
        try:
            spec = parse_problem(text)
        except ParseError as err:
            _check_span(err, text)
        else:
            assert isinstance(spec, (ProblemSpec, VideSpec))
            assert parse_problem(serialize(spec)) == spec


def test_deep_nesting_is_reported_not_crashed():
    text = 'order=1; lhs="y\'(x)"; rhs="' + "(" * 5000 + "x" + ")" * 5000 + '"; ic=[1]'
    assert kind_of(text) is ErrorKind.UNEXPECTED_TOKEN
    assert kind_of('order=1; lhs="y\'(x)"; rhs="x^99999999"; ic=[1]') is ErrorKind.UNEXPECTED_TOKEN
