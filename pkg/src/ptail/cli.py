"""Command-line interface.

Subcommands: estimate, table, hillplot, verify. Exit codes: 0 success,
1 usage/config error, 2 data error, 3 verification failure. Output files
are written atomically (temp file + rename).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import dataclass

from .errors import DataError, ThresholdError
from .estimators import EstimatorConfig, Sample, confidence_interval, gamma_hat, k_sweep, make_sample
from .models import parse_model_spec
from .montecarlo import (
    ExperimentSpec,
    run_clt_suite,
    run_largep_suite,
    run_lln_suite,
    run_mbound_suite,
    run_table,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_VERIFY = 3


@dataclass(frozen=True)
class LossDataset:
    source_path: str
    values: Sample
    n_dropped: int


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; the contract here is 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def load_losses(path: str, column: int, has_header: bool) -> LossDataset:
    """Parse one column of a comma-separated file; bad rows are dropped and counted."""
    values = []
    dropped = 0
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for i, row in enumerate(reader):
            if has_header and i == 0:
                continue
            try:
                x = float(row[column])
            except (IndexError, ValueError):
                dropped += 1
                continue
            if not math.isfinite(x):
                dropped += 1
                continue
            values.append(x)
    if len(values) < 2:
        raise DataError(f"{path}: fewer than 2 usable rows (dropped {dropped})")
    return LossDataset(source_path=path, values=make_sample(values), n_dropped=dropped)


def _atomic_write(path: str, text: str) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _parse_bool(text: str) -> bool:
    lowered = text.lower()
    if lowered not in ("true", "false"):
        raise argparse.ArgumentTypeError(f"expected true or false, got {text!r}")
    return lowered == "true"


def _parse_float_list(text: str) -> tuple:
    return tuple(float(x) for x in text.split(","))


def _parse_int_list(text: str) -> tuple:
    return tuple(int(x) for x in text.split(","))


def _cmd_estimate(args) -> int:
    dataset = load_losses(args.input, args.column, args.header)
    config = EstimatorConfig(p=args.p, k=args.k)
    if args.ci is not None:
        est = confidence_interval(dataset.values, config, args.ci)
    else:
        est = gamma_hat(dataset.values, config)
    out = {
        "n": dataset.values.n,
        "p": est.p,
        "k": est.k,
        "s_n": est.s_value,
        "gamma_hat": est.gamma_hat,
        "inv_gamma_hat": 1.0 / est.gamma_hat if est.gamma_hat > 0 else None,
    }
    if args.ci is not None:
        out["ci_lower"] = est.ci_lower
        out["ci_upper"] = est.ci_upper
        out["ci_level"] = est.ci_level
    print(json.dumps(out))
    return EXIT_OK


def _cmd_table(args) -> int:
    try:
        model = parse_model_spec(args.model)
        spec = ExperimentSpec(model=model, n=args.n, reps=args.reps,
                              p_grid=args.p, k_grid=args.k, master_seed=args.seed)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    result = run_table(spec, gamma_true=model.gamma, workers=args.workers)
    lines = ["p,k,mean,mse,se_mean"]
    for cell in result.cells:
        lines.append(
            f"{cell.p:g},{cell.k},{cell.mean:.6f},{cell.mse:.6f},{cell.se_mean:.6f}"
        )
    _atomic_write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def _cmd_hillplot(args) -> int:
    dataset = load_losses(args.input, args.column, args.header)
    n = dataset.values.n
    if args.kmax >= n:
        print(f"error: kmax ({args.kmax}) must be < n ({n})", file=sys.stderr)
        return EXIT_USAGE
    lines = ["p,k,gamma_hat,inv_gamma_hat"]
    for p in args.p:
        series = k_sweep(dataset.values, p, args.kmin, args.kmax)
        for k, g, inv_g in series.points:
            inv_text = f"{inv_g:.6f}" if inv_g is not None else ""
            lines.append(f"{p:g},{k},{g:.6f},{inv_text}")
    _atomic_write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


_SUITES = {
    "lln": lambda args: run_lln_suite(args.seed, n=args.n or 10**6,
                                      k=(args.n or 10**6) // 10),
    "clt": lambda args: run_clt_suite(args.seed, reps=args.reps or 2000),
    "mbound": lambda args: run_mbound_suite(args.seed),
    "largep": lambda args: run_largep_suite(args.seed, reps=args.reps or 500),
}


def _cmd_verify(args) -> int:
    report = _SUITES[args.suite](args)
    payload = {
        "suite": report.suite,
        "statistics": report.statistics,
        "thresholds": report.thresholds,
        "pass": report.passed,
    }
    _atomic_write(args.out, json.dumps(payload, indent=2) + "\n")
    return EXIT_OK if report.passed else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ptail", description="p-power tail-index estimation toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    est = sub.add_parser("estimate", help="estimate the tail index from a CSV column")
    est.add_argument("--input", required=True)
    est.add_argument("--column", type=int, default=0)
    est.add_argument("--header", type=_parse_bool, default=False)
    est.add_argument("--p", type=float, required=True)
    est.add_argument("--k", type=int, required=True)
    est.add_argument("--ci", type=float, default=None, help="confidence level in (0,1)")
    est.set_defaults(func=_cmd_estimate)

    tab = sub.add_parser("table", help="Monte Carlo mean/MSE table for a synthetic model")
    tab.add_argument("--model", required=True,
                     help="e.g. strict-pareto:gamma=1.0 or hall:gamma=1.0,c=1.0,delta=0.5")
    tab.add_argument("--n", type=int, required=True)
    tab.add_argument("--reps", type=int, required=True)
    tab.add_argument("--p", type=_parse_float_list, required=True)
    tab.add_argument("--k", type=_parse_int_list, required=True)
    tab.add_argument("--seed", type=int, default=0)
    tab.add_argument("--workers", type=int, default=1)
    tab.add_argument("--out", required=True)
    tab.set_defaults(func=_cmd_table)

    hill = sub.add_parser("hillplot", help="emit gamma_hat and 1/gamma_hat over a k range")
    hill.add_argument("--input", required=True)
    hill.add_argument("--column", type=int, default=0)
    hill.add_argument("--header", type=_parse_bool, default=False)
    hill.add_argument("--p", type=_parse_float_list, required=True)
    hill.add_argument("--kmin", type=int, required=True)
    hill.add_argument("--kmax", type=int, required=True)
    hill.add_argument("--out", required=True)
    hill.set_defaults(func=_cmd_hillplot)

    ver = sub.add_parser("verify", help="run a limit-law verification suite")
    ver.add_argument("--suite", required=True, choices=sorted(_SUITES))
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--out", required=True)
    ver.add_argument("--reps", type=int, default=None, help="override replication count")
    ver.add_argument("--n", type=int, default=None, help="override sample size (lln)")
    ver.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ThresholdError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
