"""Problem-file DSL.

A problem file is a list of ``key = value`` statements (``;`` optional,
``#`` starts a comment)::

    order = 2
    lhs = "y''(x)"
    rhs = "8*y(x/2) - x*y'(x) + 2"
    ic = [0, 0]
    exact = "poly(x^2)"

A first-order Volterra integro-differential equation uses ``vide_forcing``
and ``vide_kernel`` (written in the integration variable ``t``) instead of
``order``/``lhs``/``rhs``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .model import (
    Const,
    DelayedTerm,
    ExactSolution,
    Expr,
    ModelError,
    MonomialCoeff,
    ProblemSpec,
    Product,
    Sum,
    VideSpec,
    eval_expr,
)
from .series import PowerSeries, format_rational

MAX_EXPONENT = 1000
MAX_EXACT_DEGREE = 256
MAX_NESTING = 100

MAX_DIGITS = 1000
KEYS = ("order", "lhs", "rhs", "ic", "domain", "exact", "vide_forcing", "vide_kernel")


class ErrorKind(str, enum.Enum):
    UNEXPECTED_TOKEN = "unexpected token"
    BAD_RATIONAL = "bad rational"
    DELAY_OUT_OF_RANGE = "delay out of range"
    DERIVATIVE_ORDER_TOO_HIGH = "derivative order too high"
    MISSING_FIELD = "missing field"
    DUPLICATE_FIELD = "duplicate field"


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    length: int


class ParseError(ValueError):
    def __init__(self, kind: ErrorKind, span: SourceSpan, message: str):
        super().__init__(f"{span.line}:{span.column}: {kind.value}: {message}")
        self.kind = kind
        self.span = span
        self.message = message


def _span(text: str, start: int, end: int) -> SourceSpan:
    """Span for ``text[start:end]``, clamped to at least one character."""
    if not text:
        return SourceSpan(1, 1, 1)
    start = min(max(start, 0), len(text) - 1)
    end = min(max(end, start + 1), len(text))
    line = text.count("\n", 0, start) + 1
    column = start - (text.rfind("\n", 0, start) + 1) + 1
    return SourceSpan(line, column, end - start)


@dataclass(frozen=True)
class _Tok:
    kind: str
    value: str
    start: int
    end: int


def _int(tok: _Tok) -> int:
    if len(tok.value) > MAX_DIGITS:
        raise _Failure(ErrorKind.BAD_RATIONAL, tok.start, tok.end, f"integer literal longer than {MAX_DIGITS} digits")
    return int(tok.value)


class _Failure(Exception):
    """Internal carrier for an error located by absolute offsets."""

    def __init__(self, kind: ErrorKind, start: int, end: int, message: str):
        super().__init__(message)
        self.kind = kind
        self.start = start
        self.end = end
        self.message = message


# ---------------------------------------------------------------- expressions

_EXPR_PUNCT = set("()+-*/^'")


def _lex_expr(text: str, start: int, end: int) -> list[_Tok]:
    toks = []
    i = start
    while i < end:
        ch = text[i]
        if ch in " \t\r\n":
            i += 1
        elif ch.isascii() and ch.isdigit():
            j = i
            while j < end and text[j].isascii() and text[j].isdigit():
                j += 1
            toks.append(_Tok("num", text[i:j], i, j))
            i = j
        elif ch.isascii() and (ch.isalpha() or ch == "_"):
            j = i
            while j < end and text[j].isascii() and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(_Tok("name", text[i:j], i, j))
            i = j
        elif ch in _EXPR_PUNCT:
            toks.append(_Tok(ch, ch, i, i + 1))
            i += 1
        else:
            raise _Failure(ErrorKind.UNEXPECTED_TOKEN, i, i + 1, f"unexpected character {ch!r}")
    toks.append(_Tok("eof", "", end, end))
    return toks


def _negate(e: Expr) -> Expr:
    if isinstance(e, Const):
        return Const(-e.value)
    if isinstance(e, Product):
        head = e.children[0]
        if isinstance(head, Const):
            return Product((Const(-head.value),) + e.children[1:])
        return Product((Const(-1),) + e.children)
    return Product((Const(-1), e))


class _ExprParser:
    def __init__(self, text: str, start: int, end: int, var: str):
        self.text = text
        self.toks = _lex_expr(text, start, end)
        self.pos = 0
        self.var = var
        self.depth = 0
        self.delayed: list[tuple[DelayedTerm, int, int]] = []

    @property
    def tok(self) -> _Tok:
        return self.toks[self.pos]

    def advance(self) -> _Tok:
        tok = self.toks[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def fail(self, message: str, tok: Optional[_Tok] = None) -> _Failure:
        tok = tok or self.tok
        if tok.kind == "eof":
            message = f"{message}, found end of expression"
            return _Failure(ErrorKind.UNEXPECTED_TOKEN, tok.start - 1, tok.start, message)
        return _Failure(ErrorKind.UNEXPECTED_TOKEN, tok.start, tok.end, f"{message}, found {tok.value!r}")

    def expect(self, kind: str, what: str) -> _Tok:
        if self.tok.kind != kind:
            raise self.fail(f"expected {what}")
        return self.advance()

    def parse(self) -> Expr:
        if self.tok.kind == "eof":
            raise self.fail("empty expression")
        e = self.expr()
        if self.tok.kind != "eof":
            raise self.fail("expected an operator")
        return e

    def expr(self) -> Expr:
        terms = [self.term()]
        while self.tok.kind in ("+", "-"):
            op = self.advance().kind
            t = self.term()
            terms.append(t if op == "+" else _negate(t))
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))

    def term(self) -> Expr:
        factors = [self.factor()]
        while self.tok.kind == "*":
            self.advance()
            factors.append(self.factor())
        return factors[0] if len(factors) == 1 else Product(tuple(factors))

    def factor(self) -> Expr:
        self.depth += 1
        if self.depth > MAX_NESTING:
            raise self.fail("expression nested too deeply")
        try:
            return self._factor()
        finally:
            self.depth -= 1

    def _factor(self) -> Expr:
        tok = self.tok
        if tok.kind == "num":
            return Const(self.rational())
        if tok.kind == "-":
            self.advance()
            return _negate(self.factor())
        if tok.kind == "(":
            self.advance()
            e = self.expr()
            self.expect(")", "')'")
            return e
        if tok.kind == "name" and tok.value == self.var:
            self.advance()
            return MonomialCoeff(self.exponent(allow_zero=True))
        if tok.kind == "name" and tok.value == "y":
            return self.delayed_term()
        raise self.fail("expected a number, variable, delayed term or '('")

    def uint(self) -> tuple[int, _Tok]:
        tok = self.expect("num", "an unsigned integer")
        return _int(tok), tok

    def rational(self) -> Fraction:
        num, first = self.uint()
        if self.tok.kind == "/" and self.toks[self.pos + 1].kind == "num":
            self.advance()
            den, last = self.uint()
            if den == 0:
                raise _Failure(ErrorKind.BAD_RATIONAL, first.start, last.end, "zero denominator")
            return Fraction(num, den)
        return Fraction(num)

    def exponent(self, allow_zero: bool) -> int:
        if self.tok.kind != "^":
            return 1
        self.advance()
        value, tok = self.uint()
        if value > MAX_EXPONENT:
            raise _Failure(ErrorKind.UNEXPECTED_TOKEN, tok.start, tok.end, f"exponent above {MAX_EXPONENT}")
        if value == 0 and not allow_zero:
            raise _Failure(ErrorKind.UNEXPECTED_TOKEN, tok.start, tok.end, "power of y must be positive")
        return value

    def delayed_term(self) -> DelayedTerm:
        head = self.advance()
        order = 0
        while self.tok.kind == "'":
            self.advance()
            order += 1
        self.expect("(", "'(' after y")
        delay = self.delay_arg()
        self.expect(")", "')' closing the argument of y")
        power = self.exponent(allow_zero=False)
        term = DelayedTerm(order, delay, power)
        self.delayed.append((term, head.start, self.toks[self.pos - 1].end))
        return term

    def delay_arg(self) -> Fraction:
        start = self.tok.start
        if self.tok.kind == "name" and self.tok.value == self.var:
            self.advance()
            if self.tok.kind != "/":
                return Fraction(1)
            self.advance()
            den, tok = self.uint()
            if den == 0:
                raise _Failure(ErrorKind.BAD_RATIONAL, start, tok.end, "zero denominator in delay")
            return Fraction(1, den)
        if self.tok.kind == "(":
            self.advance()
            q = self.rational()
            self.expect(")", "')'")
        elif self.tok.kind == "num":
            q = self.rational()
        else:
            raise self.fail(f"expected a delay argument like {self.var}, {self.var}/2 or 1/2*{self.var}")
        self.expect("*", f"'*{self.var}'")
        var = self.tok
        if not (var.kind == "name" and var.value == self.var):
            raise self.fail(f"expected {self.var!r}")
        self.advance()
        if not 0 < q <= 1:
            raise _Failure(ErrorKind.DELAY_OUT_OF_RANGE, start, var.end, f"delay ratio {q} is not in (0, 1]")
        return q


def _parse_expr_at(text: str, start: int, end: int, var: str = "x") -> tuple[Expr, list]:
    p = _ExprParser(text, start, end, var)
    e = p.parse()
    return e, p.delayed


def parse_expr(text: str, var: str = "x") -> Expr:
    """Parse a right-hand-side expression; rationals stay exact."""
    try:
        return _parse_expr_at(text, 0, len(text), var)[0]
    except _Failure as f:
        raise ParseError(f.kind, _span(text, f.start, f.end), f.message) from None


# -------------------------------------------------------------------- files

_FILE_PUNCT = set("=;[],/-")


def _lex_file(text: str) -> list[_Tok]:
    toks = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch == "#":
            while i < n and text[i] != "\n":
                i += 1
        elif ch == '"':
            j = text.find('"', i + 1)
            if j < 0:
                raise _Failure(ErrorKind.UNEXPECTED_TOKEN, i, n, "unterminated string")
            toks.append(_Tok("string", text[i + 1 : j], i, j + 1))
            i = j + 1
        elif ch.isascii() and ch.isdigit():
            j = i
            while j < n and text[j].isascii() and text[j].isdigit():
                j += 1
            toks.append(_Tok("num", text[i:j], i, j))
            i = j
        elif ch.isascii() and (ch.isalpha() or ch == "_"):
            j = i
            while j < n and text[j].isascii() and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(_Tok("name", text[i:j], i, j))
            i = j
        elif ch in _FILE_PUNCT:
            toks.append(_Tok(ch, ch, i, i + 1))
            i += 1
        else:
            raise _Failure(ErrorKind.UNEXPECTED_TOKEN, i, i + 1, f"unexpected character {ch!r}")
    toks.append(_Tok("eof", "", n, n))
    return toks


@dataclass
class _Field:
    key: _Tok
    value: object
    start: int
    end: int


class _FileParser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _lex_file(text)
        self.pos = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.pos]

    def advance(self) -> _Tok:
        tok = self.toks[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def fail(self, message: str) -> _Failure:
        tok = self.tok
        if tok.kind == "eof":
            return _Failure(ErrorKind.UNEXPECTED_TOKEN, tok.start - 1, tok.start, f"{message}, found end of file")
        return _Failure(ErrorKind.UNEXPECTED_TOKEN, tok.start, tok.end, f"{message}, found {tok.value!r}")

    def expect(self, kind: str, what: str) -> _Tok:
        if self.tok.kind != kind:
            raise self.fail(f"expected {what}")
        return self.advance()

    def statements(self) -> dict[str, _Field]:
        fields: dict[str, _Field] = {}
        while self.tok.kind != "eof":
            key = self.expect("name", "a key")
            if key.value not in KEYS:
                raise _Failure(ErrorKind.UNEXPECTED_TOKEN, key.start, key.end, f"unknown key {key.value!r}")
            if key.value in fields:
                raise _Failure(ErrorKind.DUPLICATE_FIELD, key.start, key.end, f"{key.value!r} given twice")
            self.expect("=", "'='")
            start = self.tok.start
            value = self.value(key.value)
            fields[key.value] = _Field(key, value, start, self.toks[self.pos - 1].end)
            if self.tok.kind == ";":
                self.advance()
        return fields

    def value(self, key: str):
        if key == "order":
            return _int(self.expect("num", "a positive integer"))
        if key in ("ic", "domain"):
            return self.rational_list()
        return self.expect("string", 'a double-quoted expression like "y(x/2)"')

    def signed_rational(self) -> Fraction:
        start = self.tok.start
        sign = 1
        if self.tok.kind == "-":
            self.advance()
            sign = -1
        num = _int(self.expect("num", "a rational number"))
        if self.tok.kind == "/":
            self.advance()
            tok = self.expect("num", "a denominator")
            den = _int(tok)
            if den == 0:
                raise _Failure(ErrorKind.BAD_RATIONAL, start, tok.end, "zero denominator")
            return sign * Fraction(num, den)
        return Fraction(sign * num)

    def rational_list(self) -> list[Fraction]:
        self.expect("[", "'['")
        values = []
        if self.tok.kind != "]":
            values.append(self.signed_rational())
            while self.tok.kind == ",":
                self.advance()
                values.append(self.signed_rational())
        self.expect("]", "',' or ']'")
        return values


def _poly_degree_bound(e: Expr) -> int:
    if isinstance(e, MonomialCoeff):
        return e.power
    if isinstance(e, Sum):
        return max(_poly_degree_bound(c) for c in e.children)
    if isinstance(e, Product):
        return sum(_poly_degree_bound(c) for c in e.children)
    return 0


def _inner_string(tok: _Tok) -> tuple[int, int]:
    return tok.start + 1, tok.end - 1


def _polynomial_at(text: str, start: int, end: int, what: str) -> PowerSeries:
    e, delayed = _parse_expr_at(text, start, end, "x")
    if delayed:
        _, s, t = delayed[0]
        raise _Failure(ErrorKind.UNEXPECTED_TOKEN, s, t, f"{what} must not depend on y")
    bound = _poly_degree_bound(e)
    if bound > MAX_EXACT_DEGREE:
        raise _Failure(ErrorKind.UNEXPECTED_TOKEN, start, end, f"{what} degree exceeds {MAX_EXACT_DEGREE}")
    return eval_expr(e, PowerSeries.zero(bound), bound)


def _parse_exact(text: str, tok: _Tok) -> ExactSolution:
    start, end = _inner_string(tok)
    toks = _lex_expr(text, start, end)
    head = toks[0]
    if head.kind != "name" or head.value not in ("poly", "exp") or toks[1].kind != "(":
        raise _Failure(ErrorKind.UNEXPECTED_TOKEN, head.start, max(head.end, head.start + 1),
                       "exact solution must be poly(...) or exp(...)")
    close = toks[-2]
    if close.kind != ")" or len(toks) < 4:
        raise _Failure(ErrorKind.UNEXPECTED_TOKEN, close.start, max(close.end, close.start + 1),
                       f"expected ')' closing {head.value}(")
    inner = _polynomial_at(text, toks[1].end, close.start, f"{head.value}(...) argument")
    coeffs = inner.coeffs
    if head.value == "poly":
        return ExactSolution.polynomial(coeffs)
    if coeffs[0]:
        raise _Failure(ErrorKind.UNEXPECTED_TOKEN, toks[1].end, close.start,
                       "exp(p) needs p(0) = 0 so its Maclaurin coefficients stay rational")
    return ExactSolution.exp_of_polynomial(coeffs)


def _top_terms(e: Expr) -> list[Expr]:
    return list(e.children) if isinstance(e, Sum) else [e]


def _check_orders(delayed, order: int, where: str) -> None:
    for term, s, t in delayed:
        if term.deriv_order >= order:
            raise _Failure(
                ErrorKind.DERIVATIVE_ORDER_TOO_HIGH, s, t,
                f"{where} uses derivative order {term.deriv_order}; only orders below {order} "
                f"may appear outside the leading y{chr(39) * order}(x)",
            )


def _require(fields: dict[str, _Field], keys, text: str) -> None:
    for key in keys:
        if key not in fields:
            raise _Failure(ErrorKind.MISSING_FIELD, 0, len(text), f"missing required key {key!r}")


def _reject(fields: dict[str, _Field], keys, kind: str) -> None:
    for key in keys:
        if key in fields:
            tok = fields[key].key
            raise _Failure(ErrorKind.UNEXPECTED_TOKEN, tok.start, tok.end, f"{key!r} is not allowed in a {kind} file")


def _common(fields: dict[str, _Field], text: str):
    domain = (Fraction(0), Fraction(1))
    if "domain" in fields:
        f = fields["domain"]
        values = f.value
        if len(values) != 2 or values[0] != 0 or values[1] <= 0:
            raise _Failure(ErrorKind.UNEXPECTED_TOKEN, f.start, f.end, "domain must be [0, T] with T > 0")
        domain = (values[0], values[1])
    exact = _parse_exact(text, fields["exact"].value) if "exact" in fields else None
    return domain, exact


def _build_problem(fields: dict[str, _Field], text: str) -> ProblemSpec:
    _require(fields, ("order", "lhs", "rhs", "ic"), text)
    order_field = fields["order"]
    order = order_field.value
    if order < 1:
        raise _Failure(ErrorKind.UNEXPECTED_TOKEN, order_field.start, order_field.end, "order must be positive")
    ic = fields["ic"]
    if len(ic.value) != order:
        raise _Failure(ErrorKind.MISSING_FIELD, ic.start, ic.end,
                       f"order {order} needs {order} initial values, got {len(ic.value)}")

    lhs_tok = fields["lhs"].value
    lhs, lhs_delayed = _parse_expr_at(text, *_inner_string(lhs_tok))
    _check_orders([d for d in lhs_delayed if d[0].deriv_order > order], order + 1, "lhs")
    leading = DelayedTerm(order, Fraction(1), 1)
    terms = _top_terms(lhs)
    if terms.count(leading) != 1:
        raise _Failure(ErrorKind.UNEXPECTED_TOKEN, lhs_tok.start, lhs_tok.end,
                       f"lhs must contain the term y{chr(39) * order}(x) exactly once")
    rest = list(terms)
    rest.remove(leading)
    high = [d for d in lhs_delayed if d[0].deriv_order == order]
    _check_orders([d for d in high if d[0] != leading] or high[1:], order, "lhs")

    rhs, rhs_delayed = _parse_expr_at(text, *_inner_string(fields["rhs"].value))
    _check_orders(rhs_delayed, order, "rhs")
    if rest:
        parts = _top_terms(rhs) + [_negate(t) for t in rest]
        rhs = Sum(tuple(parts))

    domain, exact = _common(fields, text)
    return ProblemSpec(order=order, rhs=rhs, ics=tuple(ic.value), domain=domain, exact=exact)


def _build_vide(fields: dict[str, _Field], text: str) -> VideSpec:
    _reject(fields, ("order", "lhs", "rhs"), "VIDE")
    _require(fields, ("vide_forcing", "vide_kernel", "ic"), text)
    ic = fields["ic"]
    if len(ic.value) != 1:
        raise _Failure(ErrorKind.MISSING_FIELD, ic.start, ic.end,
                       f"a first-order VIDE needs 1 initial value, got {len(ic.value)}")
    forcing, forcing_delayed = _parse_expr_at(text, *_inner_string(fields["vide_forcing"].value), "x")
    if forcing_delayed:
        _, s, t = forcing_delayed[0]
        raise _Failure(ErrorKind.UNEXPECTED_TOKEN, s, t, "VIDE forcing must not depend on y")
    kernel, kernel_delayed = _parse_expr_at(text, *_inner_string(fields["vide_kernel"].value), "t")
    _check_orders(kernel_delayed, 1, "vide_kernel")
    domain, exact = _common(fields, text)
    return VideSpec(forcing=forcing, kernel=kernel, ics=tuple(ic.value), domain=domain, exact=exact)


def parse_problem(text: Union[str, bytes]) -> Union[ProblemSpec, VideSpec]:
    """Parse a problem file; raises :class:`ParseError` on any malformed input."""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(ErrorKind.UNEXPECTED_TOKEN, SourceSpan(1, 1, 1),
                             f"input is not valid UTF-8 (byte offset {exc.start})") from None
    try:
        fields = _FileParser(text).statements()
        if "vide_forcing" in fields or "vide_kernel" in fields:
            return _build_vide(fields, text)
        return _build_problem(fields, text)
    except _Failure as f:
        raise ParseError(f.kind, _span(text, f.start, f.end), f.message) from None
    except ModelError as exc:
        raise ParseError(ErrorKind.UNEXPECTED_TOKEN, _span(text, 0, len(text)), str(exc)) from None


# ------------------------------------------------------------ serialization


def _delay_arg(q: Fraction, var: str) -> str:
    if q == 1:
        return var
    if q.numerator == 1:
        return f"{var}/{q.denominator}"
    return f"{format_rational(q)}*{var}"


def format_expr(e: Expr, var: str = "x") -> str:
    if isinstance(e, Const):
        return format_rational(e.value)
    if isinstance(e, MonomialCoeff):
        return var if e.power == 1 else f"{var}^{e.power}"
    if isinstance(e, DelayedTerm):
        text = f"y{chr(39) * e.deriv_order}({_delay_arg(e.delay, var)})"
        return text if e.power == 1 else f"{text}^{e.power}"
    if isinstance(e, Sum):
        return " + ".join(
            f"({format_expr(c, var)})" if isinstance(c, Sum) else format_expr(c, var)
            for c in e.children
        )
    if isinstance(e, Product):
        return "*".join(
            f"({format_expr(c, var)})" if isinstance(c, (Sum, Product)) else format_expr(c, var)
            for c in e.children
        )
    raise TypeError(f"not an expression node: {e!r}")


def _format_polynomial(coeffs) -> str:
    terms = []
    for k, c in enumerate(coeffs):
        if not c:
            continue
        if k == 0:
            terms.append(format_rational(c))
        else:
            mono = "x" if k == 1 else f"x^{k}"
            terms.append(mono if c == 1 else f"{format_rational(c)}*{mono}")
    return " + ".join(terms) if terms else "0"


def format_exact(ex: ExactSolution) -> str:
    return f"{ex.kind}({_format_polynomial(ex.coeffs)})"


def serialize(spec: Union[ProblemSpec, VideSpec]) -> str:
    """Canonical DSL text; ``parse_problem(serialize(s)) == s``."""
    lines = []
    if isinstance(spec, VideSpec):
        lines.append(f'vide_forcing = "{format_expr(spec.forcing)}"')
        lines.append(f'vide_kernel = "{format_expr(spec.kernel, "t")}"')
    else:
        lines.append(f"order = {spec.order}")
        lines.append(f'lhs = "y{chr(39) * spec.order}(x)"')
        lines.append(f'rhs = "{format_expr(spec.rhs)}"')
    lines.append("ic = [" + ", ".join(format_rational(c) for c in spec.ics) + "]")
    lines.append(f"domain = [{format_rational(spec.domain[0])}, {format_rational(spec.domain[1])}]")
    if spec.exact is not None:
        lines.append(f'exact = "{format_exact(spec.exact)}"')
    return "\n".join(lines) + "\n"
