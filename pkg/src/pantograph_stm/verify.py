"""Built-in self-verification suite behind ``pantograph-stm verify``."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from importlib import resources
from typing import Callable, Optional

from . import sumudu
from .fuzz import random_equivalence_case, random_series
from .model import ProblemSpec, VideSpec, taylor_of_exact, vide_reduce
from .oracle import laguerre_rule, numeric_sumudu, picard_step
from .parser import parse_problem
from .series import PowerSeries, parse_series
from .solver import Mode, SolveOptions, solve, stm_step
from .sumudu import USeries

EXAMPLES = ("example1", "example2", "example3", "example4")

# hand-derived chains with higher-order terms discarded after every step
PAPER_CHAINS = {
    "example1": ["0", "1 x^2"],
    "example2": ["1 + 1 x", "1 + 1 x + -1 x^3"],
    "example3": ["1", "1 + 1 x^2", "1 + 1 x^2 + 1/2 x^4", "1 + 1 x^2 + 1/2 x^4 + 1/6 x^6"],
    "example4": [
        "1 + 1 x",
        "1 + 1 x + 1/2 x^2",
        "1 + 1 x + 1/2 x^2 + 1/6 x^3",
        "1 + 1 x + 1/2 x^2 + 1/6 x^3 + 1/24 x^4",
    ],
}


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


def load_example(name: str) -> ProblemSpec | VideSpec:
    text = resources.files("pantograph_stm").joinpath("problems").joinpath(f"{name}.txt").read_text("utf-8")
    return parse_problem(text)


def example_problem(name: str, N: int = 16) -> ProblemSpec:
    spec = load_example(name)
    return vide_reduce(spec, N) if isinstance(spec, VideSpec) else spec


def check_paper_chain(name: str, iters: Optional[int] = None) -> Check:
    golden = PAPER_CHAINS[name]
    k = len(golden) if iters is None else min(iters, len(golden))
    spec = example_problem(name)
    result = solve(spec, SolveOptions(mode=Mode.PAPER, max_iters=k, trunc_degree=16))
    got = [str(s) for s in result.iterates[:k]]
    return Check(f"{name} paper chain ({k} iterates)", got == golden[:k], " ; ".join(got))


def check_full_mode(name: str) -> Check:
    label = f"{name} full mode"
    if name == "example1":
        r = solve(example_problem(name), SolveOptions(trunc_degree=8))
        ok = r.converged and r.fixed_point_at == 2 and str(r.final) == "1 x^2" and r.residual_series.is_zero()
        return Check(label, ok, f"fixed point at {r.fixed_point_at}, final {r.final}")
    if name == "example2":
        spec = example_problem(name)
        r = solve(spec, SolveOptions(trunc_degree=8, max_iters=20))
        exact = parse_series("1 + 1 x + -1 x^3", 8)
        ok = (
            str(r.iterates[1]) == "1 + 1 x + -1 x^3 + 1/12 x^4 + 7/60 x^5"
            and r.final.coeffs[:4] == exact.coeffs[:4]
            and stm_step(spec, exact, 8) == exact
        )
        return Check(label, ok, f"y2 = {r.iterates[1]}, final {r.final}")
    if name == "example3":
        spec = example_problem(name)
        N = 12
        r = solve(spec, SolveOptions(trunc_degree=N, max_iters=8))
        target = taylor_of_exact(spec.exact, N)
        ok = all(
            y.coeffs[: 2 * k - 1] == target.coeffs[: 2 * k - 1]
            for k, y in enumerate(r.iterates, start=1)
            if 2 * k - 2 <= N
        )
        return Check(label, ok, f"{len(r.iterates)} iterates vs exp(x^2) Maclaurin")
    spec = example_problem(name, 8)
    r = solve(spec, SolveOptions(trunc_degree=8))
    bound = math.e - sum(1 / math.factorial(i) for i in range(9))
    ok = r.error_max is not None and abs(r.error_max - bound) <= 0.05 * bound and r.error_max <= 3.1e-6
    return Check(label, ok, f"max |y - exp(x)| = {r.error_max:.6e}")


def check_oracle_equivalence(cases: int = 1000, seed: int = 20240521) -> Check:
    rng = random.Random(seed)
    failures = 0
    for _ in range(cases):
        spec, y, N = random_equivalence_case(rng)
        if stm_step(spec, y, N) != picard_step(spec, y, N):
            failures += 1
    return Check(f"transform step == Picard step ({cases} cases)", failures == 0, f"{failures} failures")


def check_quadrature(
    forward: Optional[Callable[[PowerSeries], USeries]] = None, order: int = 64
) -> Check:
    """Certify the coefficient rule of ``forward`` against the defining integral."""
    forward = forward or sumudu.forward
    rule = laguerre_rule(order)
    worst = 0.0
    for k in range(13):
        g = PowerSeries.monomial(k, k)
        image = forward(g)
        for u in (0.1, 0.5, 1.0):
            predicted = sum(float(c) * u**j for j, c in enumerate(image.coeffs))
            numeric = numeric_sumudu(g, u, rule)
            worst = max(worst, abs(numeric - predicted) / abs(numeric))
    return Check("quadrature certifies S[x^k] = k! u^k (k <= 12)", worst <= 1e-8, f"max rel err {worst:.2e}")


def check_round_trip(cases: int = 1000, seed: int = 7) -> Check:
    rng = random.Random(seed)
    failures = 0
    for _ in range(cases):
        N = rng.randint(0, 64)
        a = random_series(rng, N, bound=10**4)
        G = USeries(random_series(rng, N, bound=10**4).coeffs)
        if sumudu.inverse(sumudu.forward(a)) != a or sumudu.forward(sumudu.inverse(G)) != G:
            failures += 1
    return Check(f"inverse/forward round trips ({cases} series)", failures == 0, f"{failures} failures")


def check_stationarity() -> Check:
    ok = all(1 + sumudu.lagrange_multiplier(n).divided_by_u_power(n) == 0 for n in range(1, 7))
    return Check("multiplier stationarity 1 + phi/u^n = 0 (n = 1..6)", ok)


def run_all(iters: Optional[int] = None, fuzz_cases: int = 1000) -> list[Check]:
    checks = [check_paper_chain(name, iters) for name in EXAMPLES]
    checks += [check_full_mode(name) for name in EXAMPLES]
    checks.append(check_oracle_equivalence(fuzz_cases))
    checks.append(check_quadrature())
    checks.append(check_round_trip(fuzz_cases))
    checks.append(check_stationarity())
    return checks

