"""Independent checks for the transform pipeline.

``picard_step`` repeats one solver step purely in the time domain, without
touching :mod:`.sumudu`.  ``numeric_sumudu`` evaluates the transform's
defining integral by Gauss-Laguerre quadrature.
"""

from __future__ import annotations

import decimal
import math
from dataclasses import dataclass
from fractions import Fraction

from .model import ProblemSpec, eval_expr
from .series import PowerSeries, evaluate, integrate

MAX_RULE_ORDER = 64


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss rule for ``integral_0^inf f(x) exp(-x) dx``."""

    nodes: tuple[float, ...]
    weights: tuple[float, ...]
    order: int


def picard_step(spec: ProblemSpec, y: PowerSeries, N: int) -> PowerSeries:
    """``y_1 + n-fold integral of rhs(y)``, with ``y_1`` the Taylor polynomial of the ics."""
    if y.trunc_degree != N:
        raise ValueError(f"iterate has truncation degree {y.trunc_degree}, expected {N}")
    start = [Fraction(0)] * (N + 1)
    for k, value in enumerate(spec.ics):
        if k <= N:
            start[k] = Fraction(value) / math.factorial(k)
    return PowerSeries(tuple(start)) + integrate(eval_expr(spec.rhs, y, N), spec.order)


def _laguerre(n: int, x):
    """Return ``L_n(x)``, ``L_{n-1}(x)`` and ``L_n'(x)`` by the three-term recurrence.

    Works for floats and for :class:`decimal.Decimal` arguments alike.
    """
    p1, p2 = x * 0 + 1, x * 0
    for j in range(1, n + 1):
        p3 = p2
        p2 = p1
        p1 = ((2 * j - 1 - x) * p2 - (j - 1) * p3) / j
    dp = n * (p1 - p2) / x
    return p1, p2, dp


def laguerre_rule(order: int) -> QuadratureRule:
    """Nodes are the roots of ``L_order``, found by Newton's method.

    Initial guesses follow the usual asymptotic root estimates, each root
    seeded from the previous ones.
    """
    if not 1 <= order <= MAX_RULE_ORDER:
        raise ValueError(f"rule order must lie in 1..{MAX_RULE_ORDER}, got {order}")
    n = order
    nodes: list[float] = []
    weights: list[float] = []
    z = 0.0
    for i in range(n):
        if i == 0:
            z = 3.0 / (1.0 + 2.4 * n)
        elif i == 1:
            z += 15.0 / (1.0 + 2.5 * n)
        else:
            ai = i - 1
            z += (1.0 + 2.55 * ai) / (1.9 * ai) * (z - nodes[i - 2])
        for _ in range(100):
            p1, p2, dp = _laguerre(n, z)
            dz = p1 / dp
            z -= dz
            if abs(dz) <= 1e-14 * max(1.0, abs(z)):
                break
        else:
            raise ArithmeticError(f"Newton iteration for root {i} of L_{n} did not converge")
        nodes.append(z)
    # float recurrences lose ~1e-12 on the tiny weights of the outer nodes
    with decimal.localcontext() as ctx:
        ctx.prec = 40
        for i, z in enumerate(nodes):
            x = decimal.Decimal(z)
            for _ in range(3):
                p1, p2, dp = _laguerre(n, x)
                x -= p1 / dp
            p1, p2, dp = _laguerre(n, x)
            nodes[i] = float(x)
            # w_i = x_i / ((n+1) L_{n+1}(x_i))^2, rewritten via L_n'(x_i) and L_{n-1}(x_i)
            weights.append(float(-1 / (dp * n * p2)))
    return QuadratureRule(tuple(nodes), tuple(weights), n)


def numeric_sumudu(g: PowerSeries, u: float, rule: QuadratureRule) -> float:
    """Quadrature value of ``integral_0^inf g(u x) exp(-x) dx``."""
    return math.fsum(w * evaluate(g, u * x) for x, w in zip(rule.nodes, rule.weights))
