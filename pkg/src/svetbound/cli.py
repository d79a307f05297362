"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or parameter
error, 3 I/O error. Set SVETBOUND_THREADS to run sweep rows in parallel.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import asin, sqrt

import numpy as np

from . import bounds, maximizer, svetlichny, verify
from .states import Family, FamilyParameter, alpha_from_gghz_tangle

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
THREADS_ENV = "SVETBOUND_THREADS"

SWEEP_COLUMNS = (
    "family", "N", "alpha", "tau", "variant", "lhv_bound",
    "analytic_max", "numeric_max", "violates", "optimizer_restarts_converged",
)

log = logging.getLogger("svetbound")


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class SweepSpec:
    family: Family
    qubits: tuple[int, ...]
    grid: tuple[float, ...]
    grid_kind: str  # "alpha" or "tau"
    variant: str
    optimize: bool
    fmt: str
    out: str | None
    config: maximizer.OptimizerConfig

    def __post_init__(self):
        if len(self.grid) < 2:
            raise UsageError("a sweep grid needs at least 2 points")


def _alpha_for(family: Family, n: int, alpha: float | None, tau: float | None) -> float:
    if tau is None:
        return alpha
    if not 0.0 <= tau <= 1.0:
        raise UsageError(f"tau must lie in [0, 1], got {tau}")
    if family is Family.GGHZ:
        return alpha_from_gghz_tangle(tau)
    if n % 2 and n > 3:
        raise UsageError(f"the ms n-tangle is undefined for odd N = {n}; pass --alpha")
    return asin(sqrt(tau))


def _parse_qubits(text: str) -> tuple[int, ...]:
    try:
        if "-" in text:
            lo, hi = (int(t) for t in text.split("-", 1))
            if hi < lo:
                raise UsageError(f"empty qubit range {text}")
            return tuple(range(lo, hi + 1))
        return (int(text),)
    except ValueError as exc:
        raise UsageError(f"--n expects an integer or a range like 3-10, got {text!r}") from exc


def _config(args) -> maximizer.OptimizerConfig:
    return maximizer.OptimizerConfig(restarts=args.restarts, seed=args.seed)


def _run_variant(param: FamilyParameter, policy: str, config) -> maximizer.MaximizationResult:
    state = param.state()
    if policy == "both":
        return maximizer.maximize_both(state, config)
    return maximizer.maximize(state, policy, config)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", newline="", encoding="utf-8") as fh:
        fh.write(text)


def cmd_bound(args) -> int:
    family = Family(args.family)
    n = args.n
    param = FamilyParameter(family, n, _alpha_for(family, n, args.alpha, args.tau))
    report = bounds.violation_report(param)
    _emit(json.dumps(report.to_dict(), indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_optimize(args) -> int:
    family = Family(args.family)
    param = FamilyParameter(family, args.n, _alpha_for(family, args.n, args.alpha, args.tau))
    if args.n > maximizer.MAX_QUBITS:
        raise UsageError(f"the maximizer is capped at N = {maximizer.MAX_QUBITS}")
    result = _run_variant(param, args.variant, _config(args))
    _emit(json.dumps(result.to_dict(), indent=2) + "\n", args.out)
    return EXIT_OK


def _sweep_row(spec: SweepSpec, n: int, x: float) -> dict:
    alpha = _alpha_for(spec.family, n, None if spec.grid_kind == "tau" else x, x if spec.grid_kind == "tau" else None)
    param = FamilyParameter(spec.family, n, alpha)
    report = bounds.violation_report(param)
    row = {
        "family": spec.family.value,
        "N": n,
        "alpha": alpha,
        "tau": report.tangle,
        "variant": spec.variant,
        "lhv_bound": report.lhv_bound,
        "analytic_max": report.analytic_max,
        "numeric_max": None,
        "violates": report.violates,
        "optimizer_restarts_converged": None,
    }
    if spec.optimize:
        result = _run_variant(param, spec.variant, spec.config)
        row.update(
            variant=result.best_variant.value,
            numeric_max=result.best_value,
            optimizer_restarts_converged=result.restarts_converged,
        )
    return row


def run_sweep(spec: SweepSpec) -> list[dict]:
    for n in spec.qubits:
        FamilyParameter(spec.family, n, 0.0)  # validate N before any work
        if spec.optimize and n > maximizer.MAX_QUBITS:
            raise UsageError(f"the maximizer is capped at N = {maximizer.MAX_QUBITS}")
    points = [(n, x) for n in spec.qubits for x in spec.grid]
    threads = _thread_count()
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(lambda p: _sweep_row(spec, *p), points))  # map keeps grid order
    return [_sweep_row(spec, *p) for p in points]


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return repr(float(value)) if isinstance(value, float) else str(value)


def format_rows(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        writer.writerow([_csv_cell(row[c]) for c in SWEEP_COLUMNS])
    return buf.getvalue()


def cmd_sweep(args) -> int:
    if args.tau_range is not None:
        lo, hi, kind = *args.tau_range, "tau"
    else:
        lo, hi, kind = *(args.alpha_range or (0.0, np.pi / 2)), "alpha"
    spec = SweepSpec(
        family=Family(args.family),
        qubits=_parse_qubits(args.n),
        grid=tuple(float(x) for x in np.linspace(lo, hi, args.count)),
        grid_kind=kind,
        variant=args.variant,
        optimize=args.optimize,
        fmt=args.format,
        out=args.out,
        config=_config(args),
    )
    rows = run_sweep(spec)
    _emit(format_rows(rows, spec.fmt), spec.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    ok = verify.run_checks(args.level, out=lambda line: print(line, flush=True))
    print("all checks passed" if ok else "verification FAILED")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_nu_table(args) -> int:
    rows = [
        {"w": w, "nu_plus": svetlichny.nu(w, "plus"), "nu_minus": svetlichny.nu(w, "minus")}
        for w in range(16)
    ]
    if args.format == "json":
        text = json.dumps(rows, indent=2) + "\n"
    else:
        text = "w,nu_plus,nu_minus\n" + "".join(f"{r['w']},{r['nu_plus']},{r['nu_minus']}\n" for r in rows)
    _emit(text, args.out)
    return EXIT_OK


def _thread_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return 1
    try:
        count = int(raw)
    except ValueError as exc:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from exc
    if count < 1:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return count


def _add_point_args(p, *, n_type=int):
    p.add_argument("--family", choices=[f.value for f in Family], required=True)
    p.add_argument("--n", type=n_type, required=True)
    grid = p.add_mutually_exclusive_group(required=n_type is int)
    if n_type is int:
        grid.add_argument("--alpha", type=float, help="state parameter in radians")
        grid.add_argument("--tau", type=float, help="n-tangle; alpha taken in [0, pi/4] for gghz")
    return grid


def _add_optimizer_args(p):
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--variant", choices=["plus", "minus", "both"], default="both")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="svetbound", description="Svetlichny bounds for GGHZ and maximal-slice states.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="closed-form maximum and violation flag")
    _add_point_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("optimize", help="numerical maximum over measurement settings")
    _add_point_args(p)
    _add_optimizer_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("sweep", help="tabulate bounds over a parameter grid")
    grid = _add_point_args(p, n_type=str)
    grid.add_argument("--alpha-range", nargs=2, type=float, metavar=("START", "STOP"))
    grid.add_argument("--tau-range", nargs=2, type=float, metavar=("START", "STOP"))
    p.add_argument("--count", type=int, default=25)
    p.add_argument("--optimize", action="store_true", help="also run the maximizer per row")
    _add_optimizer_args(p)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the self-check suites")
    p.add_argument("--level", choices=["quick", "full"], default="quick")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("nu-table", help="print nu(w) for w = 0..15")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_nu_table)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except OSError as exc:
        print(f"svetbound: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:  # includes UsageError and library precondition failures
        print(f"svetbound: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
