"""Command-line runner for the outlier-probability experiments.

    outlierlab fig1 --m 300 --seed 42 --out-dir results
    outlierlab all --format csv

Writes ``<out_dir>/<experiment>.csv`` (plus ``_checks.csv`` and, unless
``--format csv``, an ``.svg`` figure) and ``<out_dir>/summary.json``.  The
exit status is 0 only if every executed check passes.
"""

import argparse
import logging
import os
import sys
from pathlib import Path

from . import experiments
from .reporting import plot_result, write_csv, write_summary

log = logging.getLogger("outlierlab")

COMMANDS = ("fig1", "fig2", "fig3", "claims", "ptd", "randomsums", "all")


def _threads(value):
    if value == "auto":
        return None
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("threads must be >= 1 or 'auto'")
    return n


def _seed(value):
    n = int(value)
    if not 0 <= n < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return n


def build_parser():
    p = argparse.ArgumentParser(prog="outlierlab", description=__doc__.split("\n\n")[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--m", type=int, default=experiments.DESK_SCALE_M,
                   help="replicates per estimate (default 300)")
    p.add_argument("--paper-scale", action="store_true",
                   help=f"use m={experiments.PAPER_SCALE_M} replicates")
    p.add_argument("--seed", type=_seed, default=42)
    p.add_argument("--k", type=float, default=None,
                   help="outlier threshold in sd units (fig1: 3, fig2: 2.5, fig3: 3)")
    p.add_argument("--grid-size", type=int, default=20, help="fig3 grid points per axis")
    p.add_argument("--out-dir", type=Path, default=Path("results"))
    p.add_argument("--format", choices=("csv", "csv+svg"), default="csv+svg")
    p.add_argument("--threads", type=_threads, default=None, metavar="N|auto")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def run_command(command, args):
    m = experiments.PAPER_SCALE_M if args.paper_scale else args.m
    kw = {} if args.k is None else {"k": args.k}
    if command == "fig1":
        return experiments.run_figure1(m, args.seed, workers=args.threads, **kw)
    if command == "fig2":
        return experiments.run_figure2(m, args.seed, workers=args.threads, **kw)
    if command == "fig3":
        return experiments.run_figure3(experiments.default_alpha_grid(args.grid_size),
                                       experiments.default_lambda_grid(args.grid_size),
                                       seed=args.seed, workers=args.threads, **kw)
    if command == "claims":
        return experiments.run_claims_table(args.seed, m=m, workers=args.threads)
    if command == "ptd":
        return experiments.run_ptd_demo(args.seed, **kw)
    if command == "randomsums":
        return experiments.run_randomsum_demo(args.seed, **kw)
    raise ValueError(command)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if args.m < 2:
        parser.error("--m must be at least 2")
    if args.grid_size < 2:
        parser.error("--grid-size must be at least 2")

    try:
        args.out_dir.mkdir(parents=True, exist_ok=True)
        if not os.access(args.out_dir, os.W_OK):
            raise PermissionError(f"{args.out_dir} is not writable")
    except OSError as exc:
        print(f"outlierlab: cannot use output directory: {exc}", file=sys.stderr)
        return 2

    commands = COMMANDS[:-1] if args.command == "all" else (args.command,)
    results = []
    try:
        for command in commands:
            log.info("running %s", command)
            result = run_command(command, args)
            results.append(result)
            write_csv(result, args.out_dir)
            if args.format == "csv+svg":
                plot_result(result, args.out_dir / f"{result.experiment_id}.svg")
            for c in result.checks:
                print(f"{result.experiment_id}.{c.name}: {'PASS' if c.passed else 'FAIL'}")
        write_summary(results, args.out_dir)
    except ValueError as exc:
        print(f"outlierlab: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"outlierlab: I/O error: {exc}", file=sys.stderr)
        return 1
    return 0 if all(r.all_passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
