"""Equation model: right-hand-side expressions, problems and the VIDE reduction.

Problems are stored in the canonical form ``y^(n)(x) = rhs`` with initial
values ``y^(k)(0)`` for ``k < n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .series import PowerSeries, delay_compose, differentiate, pow_int


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class Const:
    value: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class MonomialCoeff:
    """The polynomial coefficient ``x**power``."""

    power: int

    def __post_init__(self) -> None:
        if self.power < 0:
            raise ModelError(f"monomial power must be non-negative, got {self.power}")


@dataclass(frozen=True)
class DelayedTerm:
    """``(d^deriv_order/dx^deriv_order [y(delay * x)]) ** power``."""

    deriv_order: int = 0
    delay: Fraction = Fraction(1)
    power: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "delay", Fraction(self.delay))
        if self.deriv_order < 0:
            raise ModelError("derivative order must be non-negative")
        if not 0 < self.delay <= 1:
            raise ModelError(f"delay ratio must lie in (0, 1], got {self.delay}")
        if self.power < 1:
            raise ModelError(f"power must be positive, got {self.power}")


@dataclass(frozen=True)
class Sum:
    children: tuple[Expr, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) < 2:
            raise ModelError("a Sum needs at least two children")


@dataclass(frozen=True)
class Product:
    children: tuple[Expr, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) < 2:
            raise ModelError("a Product needs at least two children")


Expr = Union[Const, MonomialCoeff, DelayedTerm, Sum, Product]


def delayed_terms(e: Expr):
    if isinstance(e, DelayedTerm):
        yield e
    elif isinstance(e, (Sum, Product)):
        for child in e.children:
            yield from delayed_terms(child)


def max_deriv_order(e: Expr) -> int:
    """Highest derivative order among delayed terms, -1 if ``e`` ignores y."""
    return max((t.deriv_order for t in delayed_terms(e)), default=-1)


def eval_expr(e: Expr, y: PowerSeries, N: int) -> PowerSeries:
    """Evaluate ``e`` with ``y`` substituted, modulo ``x^(N+1)``.

    Delayed derivatives are taken after the delay substitution, so
    ``DelayedTerm(1, q)`` means ``d/dx[y(q x)] = q * y'(q x)``.
    """
    if y.trunc_degree != N:
        raise ModelError(f"series has truncation degree {y.trunc_degree}, expected {N}")
    return _eval(e, y, N)


def _eval(e: Expr, y: PowerSeries, N: int) -> PowerSeries:
    if isinstance(e, Const):
        return PowerSeries.constant(e.value, N)
    if isinstance(e, MonomialCoeff):
        return PowerSeries.monomial(e.power, N)
    if isinstance(e, DelayedTerm):
        s = delay_compose(y, e.delay)
        for _ in range(e.deriv_order):
            s = differentiate(s)
        return pow_int(s, e.power)
    if isinstance(e, Sum):
        acc = _eval(e.children[0], y, N)
        for child in e.children[1:]:
            acc = acc + _eval(child, y, N)
        return acc
    if isinstance(e, Product):
        acc = _eval(e.children[0], y, N)
        for child in e.children[1:]:
            acc = acc * _eval(child, y, N)
        return acc
    raise TypeError(f"not an expression node: {e!r}")


def polynomial_expr(p: PowerSeries) -> Optional[Expr]:
    """Expression for the polynomial ``p``; None when ``p`` is zero."""
    terms: list[Expr] = []
    for k, c in enumerate(p.coeffs):
        if not c:
            continue
        if k == 0:
            terms.append(Const(c))
        elif c == 1:
            terms.append(MonomialCoeff(k))
        else:
            terms.append(Product((Const(c), MonomialCoeff(k))))
    if not terms:
        return None
    return terms[0] if len(terms) == 1 else Sum(tuple(terms))


def _trim(coeffs) -> tuple[Fraction, ...]:
    values = [Fraction(c) for c in coeffs]
    while values and not values[-1]:
        values.pop()
    return tuple(values)


@dataclass(frozen=True)
class ExactSolution:
    """A closed-form reference solution: a polynomial or ``exp`` of one.

    ``coeffs`` are the polynomial coefficients in ascending degree with
    trailing zeros removed.
    """

    kind: str
    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.kind not in ("poly", "exp"):
            raise ModelError(f"unknown exact-solution kind {self.kind!r}")
        object.__setattr__(self, "coeffs", _trim(self.coeffs))
        if self.kind == "exp" and self.coeffs and self.coeffs[0]:
            raise ModelError("exp(p) needs p(0) = 0 to have rational Maclaurin coefficients")

    @classmethod
    def polynomial(cls, coeffs) -> ExactSolution:
        return cls("poly", tuple(coeffs))

    @classmethod
    def exp_of_polynomial(cls, coeffs) -> ExactSolution:
        return cls("exp", tuple(coeffs))

    def __call__(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return math.exp(acc) if self.kind == "exp" else acc


def taylor_of_exact(ex: ExactSolution, N: int) -> PowerSeries:
    inner = PowerSeries.from_coeffs(ex.coeffs, N)
    if ex.kind == "poly":
        return inner
    # E = exp(p) satisfies E' = p' E, so k e_k = sum_j j p_j e_{k-j}.
    e = [Fraction(0)] * (N + 1)
    e[0] = Fraction(1)
    for k in range(1, N + 1):
        acc = sum((j * inner[j] * e[k - j] for j in range(1, k + 1)), Fraction(0))
        e[k] = acc / k
    return PowerSeries(tuple(e))


def _ics(values) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in values)


@dataclass(frozen=True)
class ProblemSpec:
    order: int
    rhs: Expr
    ics: tuple[Fraction, ...]
    domain: tuple[Fraction, Fraction] = (Fraction(0), Fraction(1))
    exact: Optional[ExactSolution] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "ics", _ics(self.ics))
        object.__setattr__(self, "domain", _ics(self.domain))
        if self.order < 1:
            raise ModelError(f"order must be positive, got {self.order}")
        if len(self.ics) != self.order:
            raise ModelError(f"order {self.order} needs {self.order} initial values, got {len(self.ics)}")
        if max_deriv_order(self.rhs) >= self.order:
            raise ModelError("right-hand side may only contain derivatives below the order")
        _check_domain(self.domain)


@dataclass(frozen=True)
class VideSpec:
    """``y'(x) = forcing(x) + integral_0^x kernel(y, t) dt`` with ``y(0)`` given.

    The kernel's monomials and delayed terms refer to the integration variable.
    """

    forcing: Expr
    kernel: Expr
    ics: tuple[Fraction, ...]
    domain: tuple[Fraction, Fraction] = (Fraction(0), Fraction(1))
    exact: Optional[ExactSolution] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "ics", _ics(self.ics))
        object.__setattr__(self, "domain", _ics(self.domain))
        if len(self.ics) != 1:
            raise ModelError("a first-order VIDE takes exactly one initial value")
        if max_deriv_order(self.forcing) >= 0:
            raise ModelError("VIDE forcing must not depend on y")
        if max_deriv_order(self.kernel) > 0:
            raise ModelError("VIDE kernel must not contain derivatives of y")
        _check_domain(self.domain)


def _check_domain(domain: tuple[Fraction, ...]) -> None:
    if len(domain) != 2:
        raise ModelError("domain is a pair [0, T]")
    if domain[0] != 0:
        raise ModelError("domain must start at 0")
    if domain[1] <= 0:
        raise ModelError("domain end must be positive")


def vide_reduce(v: VideSpec, N: int) -> ProblemSpec:
    """Differentiate the VIDE once to get ``y'' = forcing'(x) + kernel(y, x)``.

    At ``x = 0`` the integral vanishes, which supplies ``y'(0) = forcing(0)``.
    """
    g0 = _eval(v.forcing, PowerSeries.zero(N), N)
    dg0 = polynomial_expr(differentiate(g0))
    if dg0 is None:
        rhs = v.kernel
    else:
        head = list(dg0.children) if isinstance(dg0, Sum) else [dg0]
        tail = list(v.kernel.children) if isinstance(v.kernel, Sum) else [v.kernel]
        rhs = Sum(tuple(head + tail))
    return ProblemSpec(
        order=2,
        rhs=rhs,
        ics=(v.ics[0], g0[0]),
        domain=v.domain,
        exact=v.exact,
    )
