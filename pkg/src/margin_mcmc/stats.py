"""Co-occurrence statistics, mixing diagnostics and swap-efficiency reports."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .chains import ChainRun, run_chain
from .enumeration import strip_degenerate
from .matrix import BinaryMatrix
from .rng import RngStream


def s_bar_squared(a: BinaryMatrix) -> float:
    """Mean of squared off-diagonal entries of ``A A^T`` (Roberts-Stone S^2)."""
    m = a.m
    if m < 2:
        raise ValueError("S-bar-squared needs at least 2 rows")
    cells = a.cells.astype(np.int64)
    s = cells @ cells.T
    off = int((s * s).sum()) - int((np.diag(s) ** 2).sum())
    return off / (m * (m - 1))


def perturbation_score(a: BinaryMatrix, a0: BinaryMatrix) -> float:
    """Fraction of cells of ``a`` that differ from ``a0``."""
    if a.shape != a0.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {a0.shape}")
    return int((a.cells != a0.cells).sum()) / (a.m * a.n)


@dataclass
class StatTrace:
    """A statistic recorded along a chain, with Welford running moments.

    ``running_std`` is the sample standard deviation (ddof=1) of the values
    seen so far, 0 while only one value is present.
    """

    name: str
    iterations: list[int] = field(default_factory=list)
    values: list[float] = field(default_factory=list)
    running_mean: list[float] = field(default_factory=list)
    running_std: list[float] = field(default_factory=list)
    _mean: float = 0.0
    _m2: float = 0.0

    def add(self, iteration: int, value: float) -> None:
        if self.iterations and iteration <= self.iterations[-1]:
            raise ValueError("iterations must be strictly increasing")
        k = len(self.values) + 1
        delta = value - self._mean
        self._mean += delta / k
        self._m2 += delta * (value - self._mean)
        self.iterations.append(iteration)
        self.values.append(value)
        self.running_mean.append(self._mean)
        self.running_std.append(math.sqrt(self._m2 / (k - 1)) if k > 1 else 0.0)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def mean(self) -> float:
        return self.running_mean[-1] if self.values else math.nan

    @property
    def std(self) -> float:
        return self.running_std[-1] if self.values else math.nan

    def records(self) -> list[tuple[int, float, float, float]]:
        return list(zip(self.iterations, self.values, self.running_mean, self.running_std))


STATISTICS: dict[str, Callable[[BinaryMatrix, BinaryMatrix], float]] = {
    "s2": lambda a, a0: s_bar_squared(a),
    "perturbation": perturbation_score,
    "ones": lambda a, a0: float(a.cells.sum()),
}


def estimate_statistic(
    a0: BinaryMatrix,
    algorithm: str,
    iterations: int,
    rng: RngStream,
    statistic: str | Callable[[BinaryMatrix], float] = "s2",
    burn_in: int = 0,
    thin: int = 1,
) -> StatTrace:
    """Run a chain and trace a statistic over the retained samples."""
    if callable(statistic):
        name, fn = getattr(statistic, "__name__", "statistic"), (lambda a, _a0: statistic(a))
    else:
        if statistic not in STATISTICS:
            raise ValueError(f"unknown statistic {statistic!r}; choose from {', '.join(STATISTICS)}")
        name, fn = statistic, STATISTICS[statistic]
    trace = StatTrace(name)
    run_chain(a0, algorithm, iterations, rng, thin=thin, burn_in=burn_in,
              observer=lambda t, a: trace.add(t, fn(a, a0)))
    return trace


@dataclass
class EfficiencyReport:
    algorithm: str
    iterations: int
    swaps: int
    wall_time: float
    time_per_swap: Optional[float]


def swap_efficiency_report(run: ChainRun, wall_time: float) -> EfficiencyReport:
    swaps = run.successful_swaps
    return EfficiencyReport(run.state.algorithm, run.iterations, swaps, wall_time,
                            wall_time / swaps if swaps else None)


def bernoulli_matrix(m: int, n: int, p: float, rng: RngStream) -> BinaryMatrix:
    """i.i.d. Bernoulli(p) cells, drawn from a child stream of ``rng``."""
    return BinaryMatrix((rng.numpy().random((m, n)) < p).astype(np.uint8))


@dataclass
class BenchmarkRow:
    fill: float
    seed: int
    algorithm: str
    rows: int
    cols: int
    iterations: int
    swaps: int
    wall_time: float
    time_per_swap: Optional[float]


def timed_run(a0: BinaryMatrix, algorithm: str, iterations: int, rng: RngStream) -> EfficiencyReport:
    start = time.perf_counter()
    run = run_chain(a0, algorithm, iterations, rng)
    return swap_efficiency_report(run, time.perf_counter() - start)


def benchmark(rows: int, cols: int, fills, iterations: int, seed: int,
              algorithms=("rectangle-loop", "swap")) -> list[BenchmarkRow]:
    """Swap counts and time per swap on random matrices, one per fill level.

    Each matrix has its forced rows and columns stripped before any chain
    runs, so all algorithms see the same reduced instance.
    """
    out = []
    for fill in fills:
        base = RngStream(seed)
        a = bernoulli_matrix(rows, cols, fill, base)
        red = strip_degenerate(a)
        if red.is_empty:
            continue
        work = red.reduce(a)
        for algorithm, child in zip(algorithms, base.spawn(len(algorithms))):
            rep = timed_run(work, algorithm, iterations, child)
            out.append(BenchmarkRow(fill, seed, algorithm, work.m, work.n, iterations,
                                    rep.swaps, rep.wall_time, rep.time_per_swap))
    return out
