"""Command line interface: ``atsroot {reduce,check,ats,bench}``.

Exit codes: 0 success, 1 input or numerical error, 2 usage error or
dimension mismatch, 3 ``check`` found the standardized statistics differ.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import bench as bench_mod
from .designs import GENERATOR, SETTINGS
from .forms import VARIANTS, AtsContext
from .io import (
    FormatError,
    read_hypothesis,
    read_matrix_csv,
    read_vector_csv,
    write_matrix_csv,
    write_vector_csv,
)
from .linalg import ShapeError, matrix_rank
from .reduction import (
    EmptySolutionSetError,
    ReducedHypothesis,
    canonical_reduce,
    check_equivalence,
    kronecker_reduce,
    reduce,
)

EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_NOT_EQUAL = 3


class UsageError(Exception):
    pass


def _global_flags(parser: argparse.ArgumentParser, default) -> None:
    parser.add_argument("--json", action="store_true", default=default, help="machine readable output")
    parser.add_argument("--seed", type=int, default=default, help="random seed (bench)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="atsroot",
        description="Compact hypothesis matrices for Anova-type statistics.",
    )
    _global_flags(parser, None)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", parents=[common], help="write a compact root of a hypothesis")
    p.add_argument("input", nargs="?", help="hypothesis JSON file")
    p.add_argument("-o", "--output", required=True, help="output prefix for PREFIX.L.csv, PREFIX.y.csv, PREFIX.json")
    p.add_argument("--canonical", action="store_true", help="projection-based root (y must be 0)")
    p.add_argument("--kron", nargs=2, metavar=("W_FILE", "S_FILE"), help="reduce H_W kron H_S from its CSV factors")

    p = sub.add_parser("check", parents=[common], help="compare two hypothesis formulations")
    p.add_argument("file1")
    p.add_argument("file2")

    p = sub.add_parser("ats", parents=[common], help="evaluate a statistic")
    p.add_argument("hypothesis")
    p.add_argument("x", help="CSV file with the statistic vector")
    p.add_argument("sigma", nargs="?", help="CSV file with the covariance matrix")
    p.add_argument("--variant", choices=VARIANTS, default="ats")

    p = sub.add_parser("bench", parents=[common], help="time full versus compact evaluation")
    p.add_argument("--setting", choices=SETTINGS, required=True)
    p.add_argument("--sizes", required=True, help="comma separated q (A, B) or p (C) values")
    p.add_argument("--reps", type=int, default=5000)
    p.add_argument("--variant", choices=VARIANTS, default="ats_s")
    p.add_argument("--gamma", type=float, default=1.0, help="trace value for setting C")
    p.add_argument("--format", choices=("md", "csv"), default="md")
    p.add_argument("--csv", dest="csv_path", help="also write the records to this CSV file")
    return parser


def _reduce_payload(red: ReducedHypothesis, m: int, rank: int) -> dict:
    return {
        "m": m,
        "ell": red.ell,
        "rank": rank,
        "a": red.scale_a,
        "delta": red.shift_delta,
        "residuals": red.residuals,
    }


def cmd_reduce(args) -> int:
    if args.kron:
        if args.input or args.canonical:
            raise UsageError("--kron takes the two factor files instead of a hypothesis file")
        w, s = (read_matrix_csv(f) for f in args.kron)
        L = kronecker_reduce(w, s)
        m, d = w.shape[0] * s.shape[0], w.shape[1] * s.shape[1]
        src_gram = np.kron(w.T @ w, s.T @ s)
        red = ReducedHypothesis(L, np.zeros(L.shape[0]))
        rank = matrix_rank(w) * matrix_rank(s)
        red.residuals["gram"] = float(np.linalg.norm(L.T @ L - src_gram))
    else:
        if not args.input:
            raise UsageError("reduce needs a hypothesis file or --kron W_FILE S_FILE")
        hyp = read_hypothesis(args.input)
        m, d = hyp.H.shape
        rank = hyp.rank
        if args.canonical:
            if np.any(hyp.y != 0):
                raise UsageError("--canonical needs y = 0")
            L = canonical_reduce(hyp.H)
            red = ReducedHypothesis(L, np.zeros(L.shape[0]))
        else:
            red = reduce(hyp)
            gram = hyp.H.T @ hyp.H
            red.residuals["gram"] = float(np.linalg.norm(red.scale_a * red.L.T @ red.L - gram))

    prefix = args.output
    write_matrix_csv(f"{prefix}.L.csv", red.L if red.ell else np.zeros((0, d)))
    write_vector_csv(f"{prefix}.y.csv", red.y_tilde)
    payload = _reduce_payload(red, m, rank)
    Path(f"{prefix}.json").write_text(json.dumps(payload, indent=2) + "\n")
    if args.json:
        print(json.dumps(payload))
    else:
        print(f"{m} → {red.ell} rows")
    return 0


def _format_report(report: dict) -> str:
    flat = {k: v for k, v in report.items() if k != "residuals"}
    flat.update({f"residual.{k}": v for k, v in report["residuals"].items()})
    width = max(len(k) for k in flat)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in flat.items())


def cmd_check(args) -> int:
    h1, h2 = read_hypothesis(args.file1), read_hypothesis(args.file2)
    if h1.d != h2.d:
        print(f"error: dimension mismatch, d = {h1.d} vs d = {h2.d}", file=sys.stderr)
        return EXIT_USAGE
    report = check_equivalence(h1, h2).as_dict()
    print(json.dumps(report) if args.json else _format_report(report))
    return 0 if report["ats_s_equal"] else EXIT_NOT_EQUAL


def cmd_ats(args) -> int:
    hyp = read_hypothesis(args.hypothesis)
    x = read_vector_csv(args.x)
    if args.variant != "ats" and args.sigma is None:
        raise UsageError(f"--variant {args.variant} needs a covariance file")
    sigma = read_matrix_csv(args.sigma) if args.sigma else None
    value = AtsContext(hyp.H, hyp.y, sigma).evaluate(x, args.variant)
    if args.json:
        print(json.dumps({"variant": args.variant, "value": value}))
    else:
        print(f"{value:.12g}")
    return 0


def cmd_bench(args) -> int:
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"--sizes must be comma separated integers, got {args.sizes!r}") from None
    if not sizes:
        raise UsageError("--sizes is empty")
    if args.reps < 1:
        raise UsageError("--reps must be at least 1")
    seed = 0 if args.seed is None else args.seed
    records = bench_mod.run_bench(args.setting, sizes, args.reps, seed, args.variant, args.gamma)
    if args.csv_path:
        bench_mod.write_bench_csv(args.csv_path, records)
    if args.format == "csv":
        sys.stdout.write(bench_mod.format_csv(records))
    else:
        sys.stdout.write(bench_mod.format_markdown(records))
        print(f"\ngenerator: {GENERATOR}, seed {seed}")
    return 0


COMMANDS = {"reduce": cmd_reduce, "check": cmd_check, "ats": cmd_ats, "bench": cmd_bench}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EmptySolutionSetError:
        print("error: empty solution set", file=sys.stderr)
        return EXIT_ERROR
    except ShapeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
