"""Random problems and series for equivalence and round-trip checks."""

from __future__ import annotations

import random
from fractions import Fraction

from .model import (
    Const,
    DelayedTerm,
    ExactSolution,
    Expr,
    MonomialCoeff,
    ProblemSpec,
    Product,
    Sum,
    VideSpec,
)
from .series import PowerSeries

DELAYS = (Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(1))


def random_rational(rng: random.Random, bound: int = 9) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_series(rng: random.Random, N: int, bound: int = 9) -> PowerSeries:
    return PowerSeries(tuple(random_rational(rng, bound) for _ in range(N + 1)))


def random_polynomial_rhs(rng: random.Random, order: int) -> Expr:
    """Sum of products of constants, powers of x and delayed terms below ``order``."""
    terms: list[Expr] = []
    for _ in range(rng.randint(1, 4)):
        factors: list[Expr] = [Const(random_rational(rng))]
        if rng.random() < 0.5:
            factors.append(MonomialCoeff(rng.randint(0, 2)))
        for _ in range(rng.randint(0, 2)):
            factors.append(
                DelayedTerm(rng.randrange(order), rng.choice(DELAYS), rng.randint(1, 3))
            )
        terms.append(factors[0] if len(factors) == 1 else Product(tuple(factors)))
    return terms[0] if len(terms) == 1 else Sum(tuple(terms))


def random_equivalence_case(rng: random.Random) -> tuple[ProblemSpec, PowerSeries, int]:
    order = rng.randint(1, 3)
    N = rng.randint(order, 12)
    spec = ProblemSpec(
        order=order,
        rhs=random_polynomial_rhs(rng, order),
        ics=tuple(random_rational(rng) for _ in range(order)),
    )
    return spec, random_series(rng, N), N


def random_expr(rng: random.Random, order: int, depth: int = 3, var_ok: bool = True) -> Expr:
    """Arbitrary tree shape, including nested sums and negative constants."""
    leaf = depth == 0 or rng.random() < 0.35
    if leaf:
        kind = rng.randrange(3 if var_ok else 2)
        if kind == 0:
            return Const(random_rational(rng, 10**6))
        if kind == 1 and order > 0:
            q = rng.choice(DELAYS + (Fraction(rng.randint(1, 50), rng.randint(50, 99)),))
            return DelayedTerm(rng.randrange(order), q, rng.randint(1, 4))
        return MonomialCoeff(rng.randint(0, 5))
    children = tuple(random_expr(rng, order, depth - 1, var_ok) for _ in range(rng.randint(2, 4)))
    return Sum(children) if rng.random() < 0.5 else Product(children)


def random_exact(rng: random.Random):
    if rng.random() < 0.3:
        return None
    coeffs = [random_rational(rng) for _ in range(rng.randint(1, 5))]
    if rng.random() < 0.5:
        return ExactSolution.polynomial(coeffs)
    return ExactSolution.exp_of_polynomial([0] + coeffs)


def random_spec(rng: random.Random):
    domain = (Fraction(0), Fraction(rng.randint(1, 20), rng.randint(1, 10)))
    if rng.random() < 0.2:
        forcing = random_expr(rng, 0, 2)
        kernel = random_expr(rng, 1, 3)
        return VideSpec(forcing, kernel, (random_rational(rng),), domain, random_exact(rng))
    order = rng.randint(1, 4)
    return ProblemSpec(
        order=order,
        rhs=random_expr(rng, order),
        ics=tuple(random_rational(rng, 10**6) for _ in range(order)),
        domain=domain,
        exact=random_exact(rng),
    )
