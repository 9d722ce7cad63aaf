"""Command line entry point: ``logint {eval,quad,verify,table}``.

Exit codes: 0 when everything passes, 1 on a failed check or I/O error,
2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__
from . import fib_corollaries as fc
from .closed_forms import closed_F_general
from .harness import SUITES, GridConfig, VerificationReport, load_config, run_suite
from .quadrature import F_integrand, IntegrandError, OracleDidNotConverge, integrate
from .tables import FORMATS, TABLE_FAMILIES, build_table, emit

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
CASE_COLUMNS = ("identity_id", "parameters", "lhs", "rhs", "abs_err", "rel_err", "pass", "equality_level",
                "tolerance", "note")
CHECK_TOL = 1e-9


class UsageError(Exception):
    pass


def int_range(text: str) -> List[int]:
    """'3', '0..3' (inclusive) or '0,2,5'."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer range: {text!r}") from None


def float_list(text: str) -> List[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of numbers: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="logint", description="Closed forms and checks for log integrals F(m,k,a).")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="closed-form value of F(m,k,a)")
    ev.add_argument("--m", type=int, default=0)
    ev.add_argument("--k", type=int, default=0)
    ev.add_argument("--a", type=float, required=True)
    ev.add_argument("--exact", action="store_true", help="also print the exact expression")
    ev.add_argument("--check", action="store_true", help="cross-check against quadrature")

    qd = sub.add_parser("quad", help="numerical value of F(m,k,a) or of a Fibonacci family integrand")
    qd.add_argument("--m", type=int, default=0)
    qd.add_argument("--k", type=int, default=0)
    qd.add_argument("--a", type=float)
    qd.add_argument("--family", choices=[f.value for f in fc.FibFamily])
    qd.add_argument("--r", type=int, default=2)
    qd.add_argument("--tol", type=float, default=1e-12)

    vf = sub.add_parser("verify", help="run an identity suite and write a report")
    vf.add_argument("--suite", choices=SUITES)
    vf.add_argument("--tol", type=float)
    vf.add_argument("--grid", help="JSON config file (suite, tolerance, out, format, grid keys)")
    vf.add_argument("--out")
    vf.add_argument("--format", choices=FORMATS)
    vf.add_argument("--jobs", type=int, default=1)
    vf.add_argument("--plot", action="store_true", help="write an error plot next to --out")

    tb = sub.add_parser("table", help="emit a table of closed forms with oracle cross-check")
    tb.add_argument("--family", choices=TABLE_FAMILIES, required=True)
    tb.add_argument("--k", type=int_range, default=[0, 1, 2, 3])
    tb.add_argument("--m", type=int_range, default=[0])
    tb.add_argument("--a", type=float_list, default=[1.0, 2.0])
    tb.add_argument("--r", type=int_range, default=[2])
    tb.add_argument("--fib-family", dest="fib_family", action="append", choices=[f.value for f in fc.FibFamily])
    tb.add_argument("--format", choices=FORMATS, default="csv")
    tb.add_argument("--out")
    tb.add_argument("--plot", action="store_true", help="write a figure next to --out")
    return p


def _write(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    Path(out).write_text(text)


def _check_F_args(m: int, k: int, a: Optional[float]) -> None:
    if m < 0 or k < 0:
        raise UsageError("--m and --k must be non-negative")
    if a is None or not a > 0:
        raise UsageError("--a must be positive")


def cmd_eval(args) -> int:
    _check_F_args(args.m, args.k, args.a)
    expr = closed_F_general(args.m, args.k)
    # high-precision evaluation so the printed digits are correctly rounded
    precise = expr.evaluate_decimal(str(args.a))
    value = float(precise)
    print(f"{precise:.15f}")
    if args.exact:
        print(str(expr))
    if args.check:
        res = integrate(F_integrand(args.m, args.k, args.a))
        rel = abs(res.value - value) / abs(value)
        ok = rel <= CHECK_TOL
        print(f"quadrature {res.value:.15f} rel_err {rel:.3e} {'ok' if ok else 'MISMATCH'}")
        return EXIT_OK if ok else EXIT_FAIL
    return EXIT_OK


def cmd_quad(args) -> int:
    if args.family:
        if args.k < 0:
            raise UsageError("--k must be non-negative")
        spec = fc.FibIntegrandSpec(fc.FibFamily(args.family), args.k, args.r)
        f = fc.build_integrand(spec)
    else:
        _check_F_args(args.m, args.k, args.a)
        f = F_integrand(args.m, args.k, args.a)
    res = integrate(f, args.tol)
    print(f"{res.value:.15f}")
    print(f"abs_error_estimate {res.abs_error_estimate:.3e} evaluations {res.function_evaluations} "
          f"levels {res.subdivisions}")
    return EXIT_OK


def report_as_table(report: VerificationReport, fmt: str) -> str:
    rows = [c.to_dict() for c in report.cases]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CASE_COLUMNS)
        for r in rows:
            w.writerow([json.dumps(r[c], sort_keys=True) if c == "parameters" else r[c] for c in CASE_COLUMNS])
        return buf.getvalue()
    s = report.summary
    lines = [f"**{s['suite']}**: {s['passed']}/{s['total']} passed", "",
             "| " + " | ".join(CASE_COLUMNS) + " |", "|" + "---|" * len(CASE_COLUMNS)]
    for r in rows:
        cells = [json.dumps(r[c], sort_keys=True) if c == "parameters" else str(r[c]) for c in CASE_COLUMNS]
        lines.append("| " + " | ".join(x.replace("|", "\\|") for x in cells) + " |")
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> int:
    conf = load_config(args.grid) if args.grid else {}
    suite = args.suite or conf.pop("suite", "all")
    tol = args.tol if args.tol is not None else conf.pop("tolerance", None)
    out = args.out or conf.pop("out", None)
    fmt = args.format or conf.pop("format", "json")
    for key in ("suite", "tolerance", "out", "format"):
        conf.pop(key, None)
    if suite not in SUITES:
        raise UsageError(f"unknown suite {suite!r}")
    if fmt not in FORMATS:
        raise UsageError(f"unknown format {fmt!r}")
    if tol is not None and not (1e-13 <= tol <= 1e-3):
        raise UsageError("--tol must lie in [1e-13, 1e-3]")
    try:
        grid = GridConfig.from_mapping(conf)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    report = run_suite(suite, tol, grid, jobs=max(1, args.jobs))
    text = report.to_json() if fmt == "json" else report_as_table(report, fmt)
    _write(text, out)
    if args.plot:
        if out is None:
            raise UsageError("--plot needs --out")
        from .plotting import figure_path, plot_report

        plot_report(report, figure_path(out, "errors"))
    s = report.summary
    print(f"{s['suite']}: {s['passed']}/{s['total']} passed", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_table(args) -> int:
    if any(k < 0 for k in args.k) or any(m < 0 for m in args.m):
        raise UsageError("--k and --m must be non-negative")
    if args.family != "fib" and any(not a > 0 for a in args.a):
        raise UsageError("--a values must be positive")
    fams = [fc.FibFamily(f) for f in args.fib_family] if args.fib_family else None
    rows = build_table(args.family, args.k, args.a, args.m, args.r, fams)
    _write(emit(rows, args.format), args.out)
    if args.plot:
        if args.out is None:
            raise UsageError("--plot needs --out")
        from .plotting import figure_path, plot_table

        plot_table(rows, figure_path(args.out, "values"))
    return EXIT_OK if all(r.rel_err <= CHECK_TOL for r in rows) else EXIT_FAIL


COMMANDS = {"eval": cmd_eval, "quad": cmd_quad, "verify": cmd_verify, "table": cmd_table}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"logint {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (IntegrandError, ValueError) as exc:
        print(f"logint {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OracleDidNotConverge as exc:
        print(f"logint {args.command}: quadrature did not converge: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"logint {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
