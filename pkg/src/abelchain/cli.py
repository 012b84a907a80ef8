"""Command line: ``abelchain hierarchy | verify | integrate``.

Exit codes: 0 pass, 1 verification failure, 2 usage, 3 guard truncation.
The JSON report on stdout is deterministic; wall time and the run manifest
go to stderr (and to ``$ABELCHAIN_OUT_DIR`` when set).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .hierarchy import OperatorKind, hierarchy_member
from .numerics import ImmediateSingularity, IntegratorConfig, Method, drift_report, integrate
from .polycore import DEFAULT_MAX_ORDER, JetOrderOverflow, render
from .suites import SUITES, SuiteUsageError, outcome, run_suite

SCHEMA_VERSION = 1
OUT_DIR_ENV = "ABELCHAIN_OUT_DIR"

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def _pos_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0 or value != value or value == float("inf"):
        raise argparse.ArgumentTypeError("must be a positive finite number")
    return value


def _float_list(text: str) -> list:
    try:
        values = [float(part) for part in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None
    if any(v != v or abs(v) == float("inf") for v in values):
        raise argparse.ArgumentTypeError("initial state must be finite")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="abelchain", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    family = dict(choices=[k.value for k in OperatorKind], default="abel")

    p = sub.add_parser("hierarchy", help="print one member of a hierarchy")
    p.add_argument("--family", **family)
    p.add_argument("--order", type=_nonneg_int, required=True)
    p.add_argument("--format", choices=["text", "json", "latex"], default="text")

    p = sub.add_parser("verify", help="run the identity suites")
    p.add_argument("--family", **family)
    p.add_argument("--order", type=_pos_int, default=None, help="single order; default sweeps")
    p.add_argument("--suite", choices=[*SUITES, "all"], default="all")
    p.add_argument("--max-order", type=_pos_int, default=None, help="depth of the sweep")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("integrate", help="integrate a member and report integral drift")
    p.add_argument("--family", **family)
    p.add_argument("--order", type=_pos_int, required=True)
    p.add_argument("--k", type=_rational, required=True)
    p.add_argument("--x0", type=_float_list, required=True)
    p.add_argument("--t1", type=_positive_float, default=1.0)
    p.add_argument("--method", choices=[m.value for m in Method], default="rkf45")
    p.add_argument("--tol", type=_positive_float, default=1e-10)
    p.add_argument("--step", type=_positive_float, default=0.01)
    p.add_argument("--out", type=Path, default=None, help="CSV path; the drift report goes next to it")
    return parser


def cmd_hierarchy(args) -> tuple:
    try:
        member = hierarchy_member(args.family, args.order)
    except JetOrderOverflow as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        text = _dumps({"schema_version": SCHEMA_VERSION, **member.to_json()})
    elif args.format == "latex":
        text = f"{render(member.expression, 'latex')}\nF = {render(member.force, 'latex')}"
    else:
        text = f"{render(member.expression)}\nF = {render(member.force)}"
    return text, EXIT_OK, "pass"


def cmd_verify(args) -> tuple:
    if args.max_order is not None and args.max_order + 1 > DEFAULT_MAX_ORDER:
        raise UsageError(f"--max-order must be at most {DEFAULT_MAX_ORDER - 1}")
    if args.order is not None and args.order + 1 > DEFAULT_MAX_ORDER:
        raise UsageError(f"--order must be at most {DEFAULT_MAX_ORDER - 1}")
    try:
        results = run_suite(args.suite, args.family, args.order, args.max_order, args.seed)
    except SuiteUsageError as exc:
        raise UsageError(str(exc)) from None
    status = outcome(results)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "verify",
        "family": args.family,
        "order": args.order,
        "suite": args.suite,
        "seed": args.seed,
        "outcome": status,
        "checks": [r.to_json() for r in results],
    }
    return _dumps(report), EXIT_OK if status == "pass" else EXIT_FAIL, status


def cmd_integrate(args) -> tuple:
    n = args.order
    if len(args.x0) != n:
        raise UsageError(f"--x0 has {len(args.x0)} values, order {n} needs {n}")
    if n + 1 > DEFAULT_MAX_ORDER:
        raise UsageError(f"--order must be at most {DEFAULT_MAX_ORDER - 1}")
    cfg = IntegratorConfig(
        method=args.method, step=args.step, abs_tol=args.tol, rel_tol=args.tol, t_span=(0.0, args.t1)
    )
    out = args.out or Path(os.environ.get(OUT_DIR_ENV, ".")) / f"{args.family}-n{n}.csv"
    drift_path = out.with_suffix(".drift.json")
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "integrate",
        "family": args.family,
        "order": n,
        "k": str(args.k),
        "x0": args.x0,
        "method": args.method,
    }
    try:
        traj = integrate(args.family, n, float(args.k), args.x0, cfg)
    except ImmediateSingularity as exc:
        report.update(outcome="immediate-singularity", error=str(exc))
        return _dumps(report), EXIT_GUARD, "immediate-singularity"
    out.parent.mkdir(parents=True, exist_ok=True)
    traj.to_csv(out)
    drift = drift_report(traj)
    drift.dump(drift_path)
    status = "truncated" if traj.truncated else "pass"
    report.update(outcome=status, csv=str(out), drift_json=str(drift_path), drift=drift.to_json())
    return _dumps(report), EXIT_GUARD if traj.truncated else EXIT_OK, status


COMMANDS = {"hierarchy": cmd_hierarchy, "verify": cmd_verify, "integrate": cmd_integrate}


def _manifest(argv, args, code, status, wall) -> dict:
    arg_set = {k: (str(v) if isinstance(v, (Path, Fraction)) else v) for k, v in vars(args).items()} if args else {}
    return {
        "schema_version": SCHEMA_VERSION,
        "command": arg_set.get("command"),
        "argv": list(argv),
        "args": arg_set,
        "seed": arg_set.get("seed"),
        "version": __version__,
        "wall_time_s": round(wall, 6),
        "exit_code": code,
        "outcome": status,
    }


def _emit_manifest(manifest: dict) -> None:
    text = json.dumps(manifest, sort_keys=True)
    print(f"manifest: {text}", file=sys.stderr)
    out_dir = os.environ.get(OUT_DIR_ENV)
    if out_dir:
        path = Path(out_dir)
        path.mkdir(parents=True, exist_ok=True)
        (path / f"manifest-{manifest['command'] or 'usage'}.json").write_text(text + "\n")


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    start = time.perf_counter()
    parser = build_parser()
    args = None
    try:
        args = parser.parse_args(argv)
        text, code, status = COMMANDS[args.command](args)
        print(text)
    except SystemExit as exc:
        # argparse: --help/--version exit 0, bad arguments exit 2
        code = exc.code if isinstance(exc.code, int) else EXIT_USAGE
        status = "pass" if code == 0 else "usage-error"
        if code == 0:
            return 0
    except UsageError as exc:
        print(f"abelchain: error: {exc}", file=sys.stderr)
        code, status = EXIT_USAGE, "usage-error"
    _emit_manifest(_manifest(argv, args, code, status, time.perf_counter() - start))
    return code


if __name__ == "__main__":
    sys.exit(main())
