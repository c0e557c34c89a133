"""Command-line front end: ``margin-mcmc <command> ...``.

Exit codes: 0 success, 2 usage error, 3 data error, 4 internal consistency
failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import shlex
import sys
import time
from typing import Iterable, Sequence

from . import __version__
from .chains import ALGORITHMS, DegenerateMatrixError, run_chain
from .datasets import load_dataset
from .enumeration import DEFAULT_CAP, StateSpaceTooLarge, enumerate_state_space, gale_ryser_feasible
from .exact import KernelConsistencyError, build_kernel, tv_distance_curve
from .matrix import Margins, MatrixFormatError, format_matrix, write_matrices
from .rng import RngStream
from .stats import STATISTICS, benchmark, estimate_statistic, swap_efficiency_report

EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 2, 3, 4
SEED_ENV = "MARGIN_MCMC_SEED"


class DataError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {v}")
    return v


def _positive(text: str) -> int:
    v = _nonneg(text)
    if v == 0:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"{SEED_ENV} must be an integer, got {raw!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="margin-mcmc",
        description="Uniform sampling and exact analysis of binary matrices with fixed margins.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def margins_args(sp):
        sp.add_argument("--row-sums", type=_int_list, required=True)
        sp.add_argument("--col-sums", type=_int_list, required=True)
        sp.add_argument("--cap", type=_positive, default=DEFAULT_CAP)

    def chain_args(sp, algorithm_default=None):
        sp.add_argument("--input", required=True, help="matrix file or embedded dataset name (finch)")
        sp.add_argument("--algorithm", choices=ALGORITHMS, required=algorithm_default is None,
                        default=algorithm_default)
        sp.add_argument("--iterations", type=_nonneg, required=True)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--burn-in", type=_nonneg, default=0)
        sp.add_argument("--thin", type=_positive, default=1)
        sp.add_argument("--output", default=None)

    sp = sub.add_parser("enumerate", help="count (and dump) all matrices with given margins")
    margins_args(sp)
    sp.add_argument("--dump", action="store_true")

    sp = sub.add_parser("kernel", help="exact transition matrix as p/q strings")
    margins_args(sp)
    sp.add_argument("--algorithm", choices=ALGORITHMS, required=True)
    sp.add_argument("--output", default=None)

    sp = sub.add_parser("tv", help="worst-case total variation to uniform vs. k")
    margins_args(sp)
    sp.add_argument("--algorithm", choices=ALGORITHMS + ("all",), default="all")
    sp.add_argument("--k-max", type=_positive, required=True)
    sp.add_argument("--output", default=None)

    sp = sub.add_parser("sample", help="run a chain and write snapshots")
    chain_args(sp)
    sp.add_argument("--report", action="store_true",
                    help="print iterations, successful swaps, wall time and time per swap")

    sp = sub.add_parser("estimate", help="trace a statistic along a chain")
    chain_args(sp, algorithm_default="rectangle-loop")
    sp.add_argument("--stat", choices=tuple(STATISTICS), default="s2")

    sp = sub.add_parser("benchmark", help="swap counts on random matrices")
    sp.add_argument("--rows", type=_positive, default=100)
    sp.add_argument("--cols", type=_positive, default=100)
    sp.add_argument("--fill", type=_float_list, default=[0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5])
    sp.add_argument("--iterations", type=_nonneg, default=10000)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--output", default=None)
    return p


def parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    args = build_parser().parse_args(argv)
    if hasattr(args, "seed") and args.seed is None:
        args.seed = _default_seed()
    return args


def _fmt(v) -> str:
    if isinstance(v, float):
        if math.isinf(v):
            return "-inf" if v < 0 else "inf"
        return repr(v)
    if v is None:
        return "NA"
    return str(v)


def emit_csv(records: Iterable[Sequence], header: Sequence[str], path: str | None,
             meta: dict | None = None) -> None:
    """Write a CSV with one ``#`` metadata line, a header and LF line endings."""
    buf = io.StringIO()
    if meta is not None:
        buf.write("# " + " ".join(f"{k}={v}" for k, v in meta.items()) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for rec in records:
        w.writerow([_fmt(v) for v in rec])
    text = buf.getvalue()
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise DataError(f"{path}: {exc.strerror or exc}") from exc


def _meta(args, argv) -> dict:
    meta = {"margin_mcmc": __version__}
    if hasattr(args, "seed"):
        meta["seed"] = args.seed
    meta["command"] = shlex.quote(" ".join(argv))
    return meta


def _space(args):
    margins = Margins.of(args.row_sums, args.col_sums)
    if not gale_ryser_feasible(margins):
        raise DataError(f"no binary matrix has row sums {list(margins.r)} "
                        f"and column sums {list(margins.c)}")
    return enumerate_state_space(margins, args.cap)


def cmd_enumerate(args, argv) -> None:
    margins = Margins.of(args.row_sums, args.col_sums)
    space = enumerate_state_space(margins, args.cap)
    print(len(space))
    if args.dump:
        for a in space:
            print()
            print(format_matrix(a))


def cmd_kernel(args, argv) -> None:
    space = _space(args)
    kernel = build_kernel(space, args.algorithm)
    keys = [s.key() for s in kernel.states]
    records = ([k] + [f"{p.numerator}/{p.denominator}" for p in row]
               for k, row in zip(keys, kernel.dense()))
    emit_csv(records, ["state"] + keys, args.output, _meta(args, argv))


def cmd_tv(args, argv) -> None:
    space = _space(args)
    algorithms = ALGORITHMS if args.algorithm == "all" else (args.algorithm,)
    records = []
    for alg in algorithms:
        curve = tv_distance_curve(build_kernel(space, alg), args.k_max)
        for (k, tv), lg in zip(curve.points, curve.log10()):
            records.append((alg, k, tv, lg))
    emit_csv(records, ["algorithm", "k", "tv", "log10_tv"], args.output, _meta(args, argv))


def cmd_sample(args, argv) -> None:
    a0 = load_dataset(args.input)
    start = time.perf_counter()
    run = run_chain(a0, args.algorithm, args.iterations, RngStream(args.seed),
                    thin=args.thin, burn_in=args.burn_in, collect=args.output is not None)
    wall = time.perf_counter() - start
    if args.output is not None:
        try:
            write_matrices(args.output, [a for _, a in run.samples])
        except OSError as exc:
            raise DataError(f"{args.output}: {exc.strerror or exc}") from exc
    else:
        print(format_matrix(run.final))
    if args.report:
        rep = swap_efficiency_report(run, wall)
        print(f"iterations={rep.iterations} swaps={rep.swaps} wall_time={rep.wall_time:.6f} "
              f"time_per_swap={_fmt(rep.time_per_swap)}")


def cmd_estimate(args, argv) -> None:
    a0 = load_dataset(args.input)
    trace = estimate_statistic(a0, args.algorithm, args.iterations, RngStream(args.seed),
                               statistic=args.stat, burn_in=args.burn_in, thin=args.thin)
    emit_csv(trace.records(), ["iteration", "value", "running_mean", "running_std"],
             args.output, _meta(args, argv))
    if args.output is not None:
        observed = STATISTICS[args.stat](a0, a0)
        print(f"observed={observed:.4f} mean={trace.mean:.4f} std={trace.std:.4f} "
              f"samples={len(trace)}")


def cmd_benchmark(args, argv) -> None:
    rows = benchmark(args.rows, args.cols, args.fill, args.iterations, args.seed)
    records = [(r.algorithm, r.fill, r.rows, r.cols, r.iterations, r.swaps, r.time_per_swap)
               for r in rows]
    emit_csv(records, ["method", "fill", "rows", "cols", "iterations", "swaps", "time_per_swap"],
             args.output, _meta(args, argv))


COMMANDS = {
    "enumerate": cmd_enumerate,
    "kernel": cmd_kernel,
    "tv": cmd_tv,
    "sample": cmd_sample,
    "estimate": cmd_estimate,
    "benchmark": cmd_benchmark,
}


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        COMMANDS[args.command](args, argv)
    except KernelConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (DataError, MatrixFormatError, StateSpaceTooLarge, DegenerateMatrixError,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return 0


if __name__ == "__main__":
    sys.exit(main())
