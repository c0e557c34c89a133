"""Feasibility of margins, degenerate-line stripping and exhaustive enumeration."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .matrix import BinaryMatrix, Margins

DEFAULT_CAP = 100_000


class StateSpaceTooLarge(RuntimeError):
    """Enumeration exceeded its cap; ``count`` states had been found."""

    def __init__(self, count: int, cap: int):
        super().__init__(f"state space has more than {cap} states (found {count} before stopping)")
        self.count = count
        self.cap = cap


def gale_ryser_feasible(margins: Margins) -> bool:
    """True iff some 0/1 matrix has row sums ``r`` and column sums ``c``."""
    r, c = margins
    m, n = len(r), len(c)
    if sum(r) != sum(c):
        return False
    if any(x > n for x in r) or any(x > m for x in c):
        return False
    rs = sorted(r, reverse=True)
    lhs = 0
    for k in range(1, m + 1):
        lhs += rs[k - 1]
        if lhs > sum(min(cj, k) for cj in c):
            return False
    return True


@dataclass
class Reduction:
    """Result of stripping forced rows and columns from an instance.

    ``rows``/``cols`` list the surviving original indices in order and
    ``fixed`` is the full-size grid with the forced cells filled in (-1 where
    the cell belongs to the reduced problem).
    """

    margins: Margins
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    fixed: np.ndarray
    full_shape: tuple[int, int]

    @property
    def is_empty(self) -> bool:
        return not self.rows or not self.cols

    @property
    def is_identity(self) -> bool:
        return self.rows == tuple(range(self.full_shape[0])) and \
            self.cols == tuple(range(self.full_shape[1]))

    def reduce(self, a: BinaryMatrix) -> BinaryMatrix:
        return BinaryMatrix(a.cells[np.ix_(self.rows, self.cols)])

    def expand(self, reduced: BinaryMatrix | None = None) -> BinaryMatrix:
        full = self.fixed.copy()
        if not self.is_empty:
            if reduced is None:
                raise ValueError("a reduced matrix is required for a non-empty reduction")
            full[np.ix_(self.rows, self.cols)] = reduced.cells
        return BinaryMatrix(full.astype(np.uint8))


def strip_degenerate(instance: BinaryMatrix | Margins) -> Reduction:
    """Drop rows with sum 0 or n and columns with sum 0 or m until none remain."""
    if isinstance(instance, BinaryMatrix):
        r, c = list(instance.row_sums), list(instance.col_sums)
    else:
        r, c = list(instance.r), list(instance.c)
    m, n = len(r), len(c)
    rows, cols = list(range(m)), list(range(n))
    fixed = np.full((m, n), -1, dtype=np.int8)
    changed = True
    while changed:
        changed = False
        for i in list(rows):
            if r[i] == 0 or r[i] == len(cols):
                value = 1 if r[i] else 0
                fixed[i, cols] = value
                rows.remove(i)
                if value:
                    for j in cols:
                        c[j] -= 1
                changed = True
        for j in list(cols):
            if c[j] == 0 or c[j] == len(rows):
                value = 1 if c[j] else 0
                fixed[rows, j] = value
                cols.remove(j)
                if value:
                    for i in rows:
                        r[i] -= 1
                changed = True
    if not rows or not cols:
        # whatever is left has no free cells
        rows, cols = [], []
    margins = Margins(tuple(r[i] for i in rows), tuple(c[j] for j in cols))
    return Reduction(margins, tuple(rows), tuple(cols), fixed, (m, n))


@dataclass
class StateSpace:
    """All matrices sharing one pair of margins, sorted by canonical key."""

    margins: Margins
    states: tuple[BinaryMatrix, ...]
    index: dict[str, int] = field(repr=False)

    @classmethod
    def from_states(cls, margins: Margins, states: Iterable[BinaryMatrix]) -> "StateSpace":
        ordered = sorted(states, key=BinaryMatrix.key)
        index = {}
        for k, a in enumerate(ordered):
            if a.margins != margins:
                raise ValueError(f"state {a.key()} does not have margins {margins}")
            if a.key() in index:
                raise ValueError(f"duplicate state {a.key()}")
            index[a.key()] = k
        return cls(margins, tuple(ordered), index)

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def position(self, a: BinaryMatrix | str) -> int:
        return self.index[a if isinstance(a, str) else a.key()]


def _residual_feasible(rows_left: Sequence[int], c: Sequence[int]) -> bool:
    return gale_ryser_feasible(Margins(tuple(rows_left), tuple(c)))


def enumerate_state_space(margins: Margins, cap: int = DEFAULT_CAP) -> StateSpace:
    """Every 0/1 matrix with the given margins, by row-wise backtracking.

    Rows are filled top to bottom; each candidate row is a column subset of
    size ``r[i]`` taken in lexicographic order, and a branch is cut as soon
    as the residual column sums cannot host the remaining rows.
    """
    r, c = margins
    m, n = len(r), len(c)
    if not gale_ryser_feasible(margins):
        return StateSpace(margins, (), {})
    found: list[BinaryMatrix] = []
    grid = np.zeros((m, n), dtype=np.uint8)
    residual = list(c)

    def fill(i: int) -> None:
        if i == m:
            if len(found) >= cap:
                raise StateSpaceTooLarge(len(found), cap)
            found.append(BinaryMatrix(grid))
            return
        open_cols = [j for j in range(n) if residual[j] > 0]
        for subset in combinations(open_cols, r[i]):
            for j in subset:
                residual[j] -= 1
            if _residual_feasible(r[i + 1:], residual):
                grid[i, list(subset)] = 1
                fill(i + 1)
                grid[i, :] = 0
            for j in subset:
                residual[j] += 1

    fill(0)
    return StateSpace.from_states(margins, found)
