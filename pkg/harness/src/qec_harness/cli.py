"""Command line front end.

Exit codes: 0 success, 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import sys

from .ler import LerRecord, default_shots, estimate_ler, read_metadata, write_csv
from .plots import plot_sweep

EXIT_OK = 0
EXIT_USAGE = 2


def _estimate_one(task: dict) -> LerRecord:
    return estimate_ler(
        task["path"],
        shots=task["shots"],
        seed=task["seed"],
        batch=task["batch"],
        d=task["d"],
        m=task["m"],
    )


def _cmd_ler(args: argparse.Namespace) -> int:
    tasks = []
    for path in args.inputs:
        d = args.d if args.d is not None else read_metadata(path).d
        shots = args.shots if args.shots is not None else default_shots(d)
        tasks.append(
            {
                "path": path,
                "shots": shots,
                "seed": args.seed,
                "batch": args.batch,
                "d": d,
                "m": args.m,
            }
        )
    if args.workers > 1 and len(tasks) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.workers) as pool:
            records = list(pool.map(_estimate_one, tasks))
    else:
        records = [_estimate_one(t) for t in tasks]
    for rec in records:
        print(
            f"{rec.path}: rate={rec.rate:.6g} stderr={rec.stderr:.3g} "
            f"({rec.failures}/{rec.shots} failures)"
        )
    if args.csv:
        write_csv(records, args.csv, append=args.append)
    return EXIT_OK


def _cmd_plot(args: argparse.Namespace) -> int:
    written = plot_sweep(args.csvs, args.out_dir, x=args.x)
    for path in written:
        print(path)
    return EXIT_OK


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qec-harness")
    sub = p.add_subparsers(dest="command", required=True)

    ler = sub.add_parser("ler", help="estimate the logical error rate of circuit files")
    ler.add_argument(
        "--in", dest="inputs", action="append", required=True,
        help="circuit file; repeat for several",
    )
    ler.add_argument("--shots", type=int, default=None,
                     help="default: 100000 for d <= 7, else 10000")
    ler.add_argument("--seed", type=int, default=0)
    ler.add_argument("--batch", type=int, default=20_000)
    ler.add_argument("--d", type=int, default=None)
    ler.add_argument("--m", type=int, default=None)
    ler.add_argument("--csv", default=None)
    ler.add_argument("--append", action="store_true")
    ler.add_argument("--workers", type=int, default=1)
    ler.set_defaults(func=_cmd_ler)

    plot = sub.add_parser("plot", help="render CSVs to PNG panels")
    plot.add_argument("--csv", dest="csvs", action="append", required=True)
    plot.add_argument("--out-dir", dest="out_dir", required=True)
    plot.add_argument("--x", choices=["auto", "m", "d"], default="auto")
    plot.set_defaults(func=_cmd_plot)
    return p


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
