"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 parse error,
3 no convergence within the iteration budget, 4 I/O error.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union

from . import verify
from .model import ExactSolution, ProblemSpec, VideSpec, vide_reduce
from .parser import ParseError, format_expr, parse_problem
from .series import PowerSeries, format_rational, evaluate, format_series
from .solver import Grid, Mode, SolveOptions, SolveResult, residual, solve

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_PARSE = 2
EXIT_NOT_CONVERGED = 3
EXIT_IO = 4


@dataclass(frozen=True)
class RunConfig:
    command: str
    input_path: Optional[Path]
    mode: Mode = Mode.FULL
    iters: int = 16
    degree: int = 16
    emit: str = "none"
    output_path: Optional[Path] = None
    grid: Optional[Grid] = None
    fuzz_cases: int = 1000
    iters_given: bool = False


def _coefficients(s: PowerSeries) -> list[str]:
    top = s.degree()
    if top is None:
        return ["0"]
    return [format_rational(c) for c in s.coeffs[: top + 1]]


def emit_plot_data(
    result: SolveResult, exact: Optional[ExactSolution], grid: Grid, fmt: str
) -> str:
    """CSV of the final iterate on ``grid`` or JSON with exact iterate coefficients."""
    xs = grid.points()
    approx = [evaluate(result.final, x) for x in xs]
    if fmt == "csv":
        out = io.StringIO()
        out.write("x,approx,exact,abs_err\n" if exact else "x,approx\n")
        for x, a in zip(xs, approx):
            if exact:
                e = exact(x)
                out.write(f"{x:.17g},{a:.17g},{e:.17g},{abs(a - e):.17g}\n")
            else:
                out.write(f"{x:.17g},{a:.17g}\n")
        return out.getvalue()
    if fmt != "json":
        raise ValueError(f"unknown emission format {fmt!r}")
    payload = {
        "trunc_degree": result.final.trunc_degree,
        "converged": result.converged,
        "fixed_point_at": result.fixed_point_at,
        "residual_max": result.residual_max,
        "error_max": result.error_max,
        "iterates": [
            {"index": k, "coefficients": _coefficients(s), "text": format_series(s)}
            for k, s in enumerate(result.iterates, start=1)
        ],
        "grid": {"start": str(grid.start), "end": str(grid.end), "step": str(grid.step)},
        "samples": [
            {"x": x, "approx": a, **({"exact": exact(x), "abs_err": abs(a - exact(x))} if exact else {})}
            for x, a in zip(xs, approx)
        ],
    }
    return json.dumps(payload, indent=2) + "\n"


def _load(cfg: RunConfig) -> Union[ProblemSpec, VideSpec]:
    data = Path(cfg.input_path).read_bytes()
    return parse_problem(data)


def _write_emission(cfg: RunConfig, content: str) -> None:
    if cfg.output_path is None:
        sys.stdout.write(content)
    else:
        Path(cfg.output_path).write_text(content, encoding="utf-8")


def _fmt(value: Optional[float]) -> str:
    return "n/a" if value is None else f"{value:.6e}"


def _prepare(cfg: RunConfig):
    try:
        spec = _load(cfg)
    except OSError as exc:
        print(f"error: cannot read {cfg.input_path}: {exc.strerror or exc}", file=sys.stderr)
        return None, EXIT_IO
    except ParseError as exc:
        print(f"{cfg.input_path}:{exc}", file=sys.stderr)
        return None, EXIT_PARSE
    if isinstance(spec, VideSpec):
        spec = vide_reduce(spec, cfg.degree)
        print(f"reduced VIDE: y''(x) = {format_expr(spec.rhs)}, ic = "
              f"[{', '.join(format_rational(c) for c in spec.ics)}]")
    if cfg.degree < spec.order:
        print(f"error: --degree {cfg.degree} is below the equation order {spec.order}", file=sys.stderr)
        return None, EXIT_PARSE
    return spec, EXIT_OK


def _grid(cfg: RunConfig, spec: ProblemSpec) -> Grid:
    return cfg.grid or Grid(spec.domain[0], spec.domain[1])


def cmd_solve(cfg: RunConfig) -> int:
    spec, status = _prepare(cfg)
    if spec is None:
        return status
    grid = _grid(cfg, spec)
    opts = SolveOptions(mode=cfg.mode, max_iters=cfg.iters, trunc_degree=cfg.degree, grid=grid)
    result = solve(spec, opts)
    for k, s in enumerate(result.iterates, start=1):
        print(f"y{k} = {format_series(s)}")
    if result.fixed_point_at is not None:
        print(f"fixed point at iteration {result.fixed_point_at}")
    print(f"converged: {'yes' if result.converged else 'no'}")
    print(f"final = {format_series(result.final)}")
    print(f"residual max: {_fmt(result.residual_max)}")
    if spec.exact is not None:
        print(f"error max: {_fmt(result.error_max)}")
    if cfg.command == "residual":
        for k, s in enumerate(result.iterates, start=1):
            print(f"residual y{k}: max {_fmt(residual(spec, s, grid)[1])}")
        print(f"residual series = {format_series(result.residual_series)}")
    if cfg.emit != "none":
        try:
            _write_emission(cfg, emit_plot_data(result, spec.exact, grid, cfg.emit))
        except OSError as exc:
            print(f"error: cannot write {cfg.output_path}: {exc.strerror or exc}", file=sys.stderr)
            return EXIT_IO
    return EXIT_OK if result.converged else EXIT_NOT_CONVERGED


def cmd_verify(cfg: RunConfig) -> int:
    iters = cfg.iters if cfg.iters_given else None
    checks = verify.run_all(iters=iters, fuzz_cases=cfg.fuzz_cases)
    width = max(len(c.name) for c in checks)
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        print(f"{status}  {c.name.ljust(width)}  {c.detail}".rstrip())
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_VERIFY_FAILED


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _grid_arg(text: str) -> Grid:
    try:
        return Grid.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pantograph-stm",
        description="Sumudu-transform variational iteration for pantograph DDEs and VIDEs.",
    )
    parser.add_argument("command", choices=("solve", "residual", "verify"))
    parser.add_argument("input", nargs="?", type=Path, help="problem file (not needed for verify)")
    parser.add_argument("--mode", choices=[m.value for m in Mode], default="full")
    parser.add_argument("--iters", type=_positive, default=None, help="iterate budget (default 16)")
    parser.add_argument("--degree", type=_positive, default=16, help="truncation degree N")
    parser.add_argument("--emit", choices=("csv", "json", "none"), default="none")
    parser.add_argument("--out", type=Path, default=None, help="emission file (default stdout)")
    parser.add_argument("--grid", type=_grid_arg, default=None, help="start:end:step (default 0:1:0.01)")
    parser.add_argument("--fuzz-cases", type=_positive, default=1000, help=argparse.SUPPRESS)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        input_path=args.input,
        mode=Mode(args.mode),
        iters=args.iters or 16,
        degree=args.degree,
        emit=args.emit,
        output_path=args.out,
        grid=args.grid,
        fuzz_cases=args.fuzz_cases,
        iters_given=args.iters is not None,
    )
    if cfg.command == "verify":
        return cmd_verify(cfg)
    if cfg.input_path is None:
        parser.error(f"{cfg.command} needs a problem file")
    return cmd_solve(cfg)
