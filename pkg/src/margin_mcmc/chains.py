"""Swap, Curveball and Rectangle Loop chains over matrices with fixed margins.

Each ``*_step`` function mutates a :class:`ChainState` in place and returns
it. :func:`run_chain` is the value-level entry point: it copies the start
matrix, runs ``T`` steps and hands out immutable snapshots.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .enumeration import strip_degenerate
from .matrix import BinaryMatrix, MutableGrid
from .rng import RngStream

ALGORITHMS = ("swap", "curveball", "rectangle-loop")


class DegenerateMatrixError(ValueError):
    """A step needed a 0 or a 1 in a row/column that has none."""


class ChainState:
    """Mutable chain state: working grid plus iteration and swap counters."""

    def __init__(self, matrix: BinaryMatrix, algorithm: str = "swap"):
        if algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {algorithm!r}; choose from {', '.join(ALGORITHMS)}")
        self.grid = MutableGrid(matrix)
        self.algorithm = algorithm
        self.iteration = 0
        self.successful_swaps = 0
        # cells flipped by the most recent step; lets callers undo it
        self.last_move: list[tuple[int, int]] = []
        # Curveball: total columns traded between the two rows
        self.traded_columns = 0
        # rows/columns drawn by the most recent swap or rectangle-loop step
        self.last_quad: tuple[int, int, int, int] | None = None

    @property
    def matrix(self) -> BinaryMatrix:
        return self.grid.snapshot()

    def key(self) -> str:
        return self.grid.key()

    def undo_last(self) -> None:
        """Revert the previous step's cell flips (counters are left alone)."""
        for i, j in self.last_move:
            self.grid.toggle(i, j)
        self.last_move = []


def _flip_quad(s: ChainState, r1: int, r2: int, c1: int, c2: int) -> None:
    g = s.grid
    move = [(r1, c1), (r1, c2), (r2, c1), (r2, c2)]
    for i, j in move:
        g.toggle(i, j)
    s.last_move = move
    s.successful_swaps += 1


def swap_step(s: ChainState, rng: RngStream) -> ChainState:
    g = s.grid
    if g.m < 2 or g.n < 2:
        raise ValueError(f"swap step needs at least 2 rows and 2 columns, got {g.m}x{g.n}")
    r1, r2 = rng.distinct_pair(g.m)
    c1, c2 = rng.distinct_pair(g.n)
    cells = g.cells
    s.last_move = []
    s.last_quad = (r1, r2, c1, c2)
    a, b = cells[r1][c1], cells[r1][c2]
    if a != b and cells[r2][c1] == b and cells[r2][c2] == a:
        _flip_quad(s, r1, r2, c1, c2)
    s.iteration += 1
    return s


def curveball_step(s: ChainState, rng: RngStream) -> ChainState:
    """One trade between two random rows.

    The row with fewer exclusive 1s (call its exclusive columns ``S``) gives
    all of them up and takes a uniformly random ``|S|``-subset of the other
    row's exclusive columns instead; the other row takes the rest of the
    pool. Nothing moves when either exclusive set is empty.
    """
    g = s.grid
    if g.m < 2:
        raise ValueError(f"curveball step needs at least 2 rows, got {g.m}")
    a, b = rng.distinct_pair(g.m)
    row_a, row_b = g.cells[a], g.cells[b]
    only_a = [k for k in range(g.n) if row_a[k] and not row_b[k]]
    only_b = [k for k in range(g.n) if row_b[k] and not row_a[k]]
    s.last_move = []
    if len(only_a) > len(only_b):
        a, b, only_a, only_b = b, a, only_b, only_a
    if only_a:
        # row a trades its exclusives for V, a subset of row b's exclusives
        v = rng.sample(only_b, len(only_a))
        move = []
        for k in only_a:
            move += [(a, k), (b, k)]
        for k in v:
            move += [(a, k), (b, k)]
        for i, j in move:
            g.toggle(i, j)
        s.last_move = move
        s.successful_swaps += 1
        s.traded_columns += 2 * len(only_a)
    s.iteration += 1
    return s


def rectangle_loop_step(s: ChainState, rng: RngStream) -> ChainState:
    g = s.grid
    cells = g.cells
    r1 = rng.below(g.m)
    c1 = rng.below(g.n)
    if cells[r1][c1]:
        zeros = g.row_zeros[r1]
        if not zeros:
            raise DegenerateMatrixError(f"row {r1} has no 0 entries")
        c2 = rng.choice(zeros)
        ones = g.col_ones[c2]
        if not ones:
            raise DegenerateMatrixError(f"column {c2} has no 1 entries")
        r2 = rng.choice(ones)
    else:
        ones = g.col_ones[c1]
        if not ones:
            raise DegenerateMatrixError(f"column {c1} has no 1 entries")
        r2 = rng.choice(ones)
        zeros = g.row_zeros[r2]
        if not zeros:
            raise DegenerateMatrixError(f"row {r2} has no 0 entries")
        c2 = rng.choice(zeros)
    s.last_move = []
    s.last_quad = (r1, r2, c1, c2)
    # r1 != r2 and c1 != c2 by construction; a checkerboard only needs the fourth cell
    if cells[r2][c1] != cells[r1][c1] and cells[r1][c2] != cells[r1][c1]:
        _flip_quad(s, r1, r2, c1, c2)
    s.iteration += 1
    return s


STEPS: dict[str, Callable[[ChainState, RngStream], ChainState]] = {
    "swap": swap_step,
    "curveball": curveball_step,
    "rectangle-loop": rectangle_loop_step,
}


@dataclass
class ChainRun:
    """Final state of a run plus the snapshots taken along the way."""

    state: ChainState
    final: BinaryMatrix
    samples: list[tuple[int, BinaryMatrix]] = field(default_factory=list)

    @property
    def iterations(self) -> int:
        return self.state.iteration

    @property
    def successful_swaps(self) -> int:
        return self.state.successful_swaps


def run_chain(
    a0: BinaryMatrix,
    algorithm: str,
    iterations: int,
    rng: RngStream,
    thin: int = 1,
    burn_in: int = 0,
    observer: Optional[Callable[[int, BinaryMatrix], None]] = None,
    collect: bool = False,
) -> ChainRun:
    """Run ``iterations`` steps of ``algorithm`` from ``a0``.

    After ``burn_in`` steps, every ``thin``-th step produces a full-size
    snapshot that is passed to ``observer(iteration, matrix)`` and, with
    ``collect=True``, stored in the returned :class:`ChainRun`.

    Rectangle Loop cannot move through rows or columns that are all 0s or
    all 1s, so for that algorithm such forced lines are stripped first and
    put back into every snapshot.
    """
    if iterations < 0 or thin < 1 or burn_in < 0:
        raise ValueError("iterations and burn_in must be >= 0 and thin >= 1")
    step = STEPS.get(algorithm)
    if step is None:
        raise ValueError(f"unknown algorithm {algorithm!r}; choose from {', '.join(ALGORITHMS)}")

    reduction = None
    work = a0
    if algorithm == "rectangle-loop":
        reduction = strip_degenerate(a0)
        if reduction.is_identity:
            reduction = None
        else:
            work = reduction.reduce(a0) if not reduction.is_empty else None

    if work is None:
        # nothing free to move: every step is a no-op
        state = ChainState(a0, algorithm)
        state.iteration = iterations
        snaps = [(t, a0) for t in range(burn_in + thin, iterations + 1, thin)]
        if observer is not None:
            for t, snap in snaps:
                observer(t, snap)
        return ChainRun(state, a0, snaps if collect else [])

    state = ChainState(work, algorithm)

    def snapshot() -> BinaryMatrix:
        snap = state.matrix
        return reduction.expand(snap) if reduction is not None else snap

    samples = []
    want = observer is not None or collect
    for t in range(1, iterations + 1):
        step(state, rng)
        if want and t > burn_in and (t - burn_in) % thin == 0:
            snap = snapshot()
            if observer is not None:
                observer(t, snap)
            if collect:
                samples.append((t, snap))
    return ChainRun(state, snapshot(), samples)
