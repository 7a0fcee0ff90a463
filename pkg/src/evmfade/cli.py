"""Command line front end: ``evm analytic|validate|figure``.

Exit status: 0 success, 2 validation or usage error, 3 Monte Carlo
disagreement.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from pathlib import Path

from . import figures
from .evm import DivergenceError, evaluate
from .fading import UnsupportedError
from .mcsim import empirical_evm
from .scenario_io import ScenarioError, load
from .specfun import DomainError, PrecisionError

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_MISMATCH = 3

ROW_FIELDS = ["sweep_value", "analytic_evm", "mc_evm", "mc_stderr", "abs_diff", "band", "passed",
              "formula_used", "eval_time_ms"]
FIGURE_FIELDS = ["curve", "x", "analytic_evm", "mc_evm", "mc_stderr", "formula_used",
                 "eval_time_ms"]


def _fmt(v):
    # repr() of a float is locale independent and round-trips exactly
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(float(v))
    return str(v)


def _csv_text(rows, fields):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for r in rows:
        w.writerow([_fmt(r.get(f)) for f in fields])
    return buf.getvalue()


def _json_safe(v):
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


def _emit(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _write_rows(rows, args, command, sweep_variable):
    if args.format == "json":
        doc = {"schema": 1, "command": command, "sweep_variable": sweep_variable,
               "rows": [{k: _json_safe(r.get(k)) for k in ROW_FIELDS} for r in rows]}
        _emit(json.dumps(doc, indent=2) + "\n", args.out)
    else:
        _emit(_csv_text(rows, ROW_FIELDS), args.out)


def _fail(msg):
    print(f"evm: error: {msg}", file=sys.stderr)
    return EXIT_INVALID


def _analytic_rows(sf, timing):
    rows = []
    for value, sc in sf.points():
        t0 = time.perf_counter()
        res = evaluate(sc)
        dt = (time.perf_counter() - t0) * 1e3
        rows.append({"sweep_value": value, "analytic_evm": res.value,
                     "formula_used": res.formula_used, "eval_time_ms": dt if timing else None,
                     "_scenario": sc})
    return rows


_ERRORS = (ScenarioError, DivergenceError, DomainError, UnsupportedError, PrecisionError)


def _describe(exc):
    if isinstance(exc, DivergenceError):
        return f"divergence: {exc}"
    if isinstance(exc, UnsupportedError):
        return f"unsupported scenario: {exc}"
    if isinstance(exc, PrecisionError):
        return f"precision: {exc}"
    return str(exc)


def cmd_analytic(args) -> int:
    try:
        sf = load(args.scenario)
        rows = _analytic_rows(sf, args.timing)
    except _ERRORS as exc:
        return _fail(_describe(exc))
    _write_rows(rows, args, "analytic", sf.sweep_variable)
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        sf = load(args.scenario)
        cfg = sf.mc_config(seed=args.seed, num_blocks=args.blocks, workers=args.workers,
                           block_length=args.block_length)
        rows = _analytic_rows(sf, args.timing)
    except _ERRORS as exc:
        return _fail(_describe(exc))
    ok = True
    for r in rows:
        if args.test_corrupt_analytic is not None:
            r["analytic_evm"] *= args.test_corrupt_analytic
        mc = empirical_evm(r["_scenario"], cfg)
        diff = abs(r["analytic_evm"] - mc.mean)
        band = max(0.01 * abs(r["analytic_evm"]), 3.0 * mc.stderr)
        r.update(mc_evm=mc.mean, mc_stderr=mc.stderr, abs_diff=diff, band=band,
                 passed=bool(diff <= band))
        ok &= r["passed"]
        if not r["passed"]:
            print(f"evm: MC disagreement at {sf.sweep_variable or 'scenario'}="
                  f"{r['sweep_value']}: analytic {r['analytic_evm']:.6g}, "
                  f"MC {mc.mean:.6g} +/- {mc.stderr:.2g}", file=sys.stderr)
    _write_rows(rows, args, "validate", sf.sweep_variable)
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_figure(args) -> int:
    if args.id not in figures.FIGURES:
        return _fail(f"unknown figure id {args.id}; choose from {sorted(figures.FIGURES)}")
    mc = None
    if args.blocks is not None:
        from .mcsim import McConfig

        try:
            mc = McConfig(num_blocks=args.blocks, seed=args.seed or 0, workers=args.workers or 1,
                          **({"block_length": args.block_length} if args.block_length else {}))
        except ValueError as exc:
            return _fail(str(exc))
    rows, manifest = figures.figure_dataset(args.id, mc=mc, timing=args.timing)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    csv_name = f"figure{args.id}.csv"
    manifest["csv"] = csv_name
    manifest["columns"] = FIGURE_FIELDS
    (out / csv_name).write_text(_csv_text(rows, FIGURE_FIELDS), encoding="utf-8")
    (out / f"figure{args.id}.json").write_text(json.dumps(manifest, indent=2) + "\n",
                                               encoding="utf-8")
    return EXIT_OK


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _seed(text):
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer seed, got {text!r}") from None
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="evm", description="Data-aided EVM under kappa-mu shadowed "
                                "fading with co-channel interference.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="output path (default: stdout)")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--timing", action="store_true",
                        help="fill eval_time_ms (off by default so output is reproducible)")

    def mc_flags(sp):
        sp.add_argument("--seed", type=_seed, help="64-bit RNG seed")
        sp.add_argument("--blocks", type=_positive_int, help="number of fading blocks")
        sp.add_argument("--workers", type=_positive_int, help="worker processes")
        sp.add_argument("--block-length", type=_positive_int, dest="block_length",
                        help="symbols per block N")

    a = sub.add_parser("analytic", help="evaluate the closed form for each sweep point")
    a.add_argument("--scenario", required=True)
    common(a)
    a.set_defaults(func=cmd_analytic)

    v = sub.add_parser("validate", help="compare closed forms with Monte Carlo")
    v.add_argument("--scenario", required=True)
    common(v)
    mc_flags(v)
    v.add_argument("--test-corrupt-analytic", type=float, default=None,
                   help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_validate)

    f = sub.add_parser("figure", help="write a figure dataset (CSV + JSON manifest)")
    f.add_argument("--id", type=int, required=True)
    f.add_argument("--out", required=True, help="output directory")
    f.add_argument("--timing", action="store_true")
    mc_flags(f)
    f.set_defaults(func=cmd_figure)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
