"""Exact transition kernels on enumerated state spaces.

Kernel entries are :class:`fractions.Fraction`; rows are stored sparsely
because a state only reaches states that differ from it in two rows. Matrix
powers for the total-variation curves are taken in floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import NamedTuple, Sequence

import numpy as np

from .enumeration import StateSpace
from .matrix import BinaryMatrix, SwapQuad, checkerboard_quads

ZERO = Fraction(0)
ONE = Fraction(1)


class KernelConsistencyError(AssertionError):
    """Two independent constructions of one kernel disagree."""


class TransitionMatrix:
    """Square exact stochastic matrix indexed by the states of a space."""

    def __init__(self, space: StateSpace, rows: Sequence[dict[int, Fraction]],
                 order: Sequence[BinaryMatrix] | None = None):
        self.space = space
        self.rows = [dict((j, p) for j, p in row.items() if p != 0) for row in rows]
        # labels in row/column order; differs from space.states after reorder()
        self.states = tuple(order) if order is not None else space.states

    def __len__(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.rows[i].get(j, ZERO)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TransitionMatrix):
            return NotImplemented
        return self.states == other.states and self.rows == other.rows

    def prob(self, a: BinaryMatrix, b: BinaryMatrix) -> Fraction:
        pos = {s.key(): k for k, s in enumerate(self.states)}
        return self[pos[a.key()], pos[b.key()]]

    def dense(self) -> list[list[Fraction]]:
        n = len(self.rows)
        return [[row.get(j, ZERO) for j in range(n)] for row in self.rows]

    def to_numpy(self) -> np.ndarray:
        n = len(self.rows)
        out = np.zeros((n, n))
        for i, row in enumerate(self.rows):
            for j, p in row.items():
                out[i, j] = float(p)
        return out

    def row_sums(self) -> list[Fraction]:
        return [sum(row.values(), ZERO) for row in self.rows]

    def is_stochastic(self) -> bool:
        return all(s == 1 for s in self.row_sums()) and all(
            0 <= p <= 1 for row in self.rows for p in row.values())

    def reorder(self, states: Sequence[BinaryMatrix]) -> "TransitionMatrix":
        """Same kernel with rows and columns relabelled in the given order."""
        old = {s.key(): k for k, s in enumerate(self.states)}
        perm = [old[s.key()] for s in states]
        if sorted(perm) != list(range(len(self.rows))):
            raise ValueError("reorder() needs a permutation of the kernel's states")
        inv = {o: k for k, o in enumerate(perm)}
        rows = [{inv[j]: p for j, p in self.rows[o].items()} for o in perm]
        return TransitionMatrix(self.space, rows, order=states)


def _with_diagonal(off: list[dict[int, Fraction]]) -> list[dict[int, Fraction]]:
    for i, row in enumerate(off):
        row[i] = row.get(i, ZERO) + ONE - sum((p for j, p in row.items() if j != i), ZERO)
    return off


def _flip_key(key: str, n: int, q: SwapQuad) -> str:
    chars = list(key)
    for i in (q.r1, q.r2):
        for j in (q.c1, q.c2):
            k = i * n + j
            chars[k] = "1" if chars[k] == "0" else "0"
    return "".join(chars)


def _neighbours(space: StateSpace, a: BinaryMatrix):
    """(quad, target position) for every swap available from ``a``."""
    key, n = a.key(), a.n
    for q in checkerboard_quads(a):
        yield q, space.position(_flip_key(key, n, q))


def build_swap_kernel(space: StateSpace) -> TransitionMatrix:
    m, n = space.margins.shape
    pairs = math.comb(m, 2) * math.comb(n, 2)
    rows = []
    for a in space.states:
        row: dict[int, Fraction] = {}
        for _, j in _neighbours(space, a):
            row[j] = Fraction(1, pairs)
        rows.append(row)
    return TransitionMatrix(space, _with_diagonal(rows))


def _differing_quad(a: BinaryMatrix, b: BinaryMatrix) -> SwapQuad:
    if a.shape != b.shape:
        raise ValueError("matrices have different shapes")
    ii, jj = np.nonzero(a.cells != b.cells)
    rows, cols = sorted(set(ii.tolist())), sorted(set(jj.tolist()))
    if len(ii) != 4 or len(rows) != 2 or len(cols) != 2:
        raise ValueError("matrices are not swappable: they do not differ in exactly one 2x2 unit")
    q = SwapQuad(rows[0], rows[1], cols[0], cols[1])
    c = a.cells
    if not (c[q.r1, q.c1] == c[q.r2, q.c2] != c[q.r1, q.c2] == c[q.r2, q.c1]):
        raise ValueError("matrices are not swappable: the differing 2x2 block is not a checkerboard")
    return q


def rectangle_pair_probability(a: BinaryMatrix, b: BinaryMatrix) -> Fraction:
    """One-step Rectangle Loop probability of moving from ``a`` to ``b``.

    With ``a`` holding 1s at (i1, j1) and (i2, j2) of the unit, the four
    possible starting corners give::

        1/(mn) * [1/((n-r_i1) c_j2) + 1/(c_j2 (n-r_i2))
                  + 1/((n-r_i2) c_j1) + 1/(c_j1 (n-r_i1))]
    """
    q = _differing_quad(a, b)
    i1, i2 = q.r1, q.r2
    j1, j2 = (q.c1, q.c2) if a[i1, q.c1] else (q.c2, q.c1)
    m, n = a.shape
    r, c = a.row_sums, a.col_sums
    zi1, zi2 = n - r[i1], n - r[i2]
    total = (Fraction(1, zi1 * c[j2]) + Fraction(1, c[j2] * zi2)
             + Fraction(1, zi2 * c[j1]) + Fraction(1, c[j1] * zi1))
    return total / (m * n)


def rectangle_kernel_closed_form(space: StateSpace) -> TransitionMatrix:
    rows = []
    for a in space.states:
        row: dict[int, Fraction] = {}
        for _, j in _neighbours(space, a):
            row[j] = rectangle_pair_probability(a, space.states[j])
        rows.append(row)
    return TransitionMatrix(space, _with_diagonal(rows))


def rectangle_kernel_enumerated(space: StateSpace) -> TransitionMatrix:
    """Kernel obtained by walking every branch of one Rectangle Loop step."""
    m, n = space.margins.shape
    start = Fraction(1, m * n)
    rows = []
    for i, a in enumerate(space.states):
        c = a.tolist()
        zeros_in_row = [[j for j in range(n) if not c[k][j]] for k in range(m)]
        ones_in_col = [[k for k in range(m) if c[k][j]] for j in range(n)]
        targets = {q: j for q, j in _neighbours(space, a)}
        row: dict[int, Fraction] = {}

        def land(p: Fraction, r1: int, r2: int, c1: int, c2: int) -> None:
            if c[r1][c1] == c[r2][c2] != c[r1][c2] == c[r2][c1]:
                j = targets[SwapQuad(min(r1, r2), max(r1, r2), min(c1, c2), max(c1, c2))]
            else:
                j = i
            row[j] = row.get(j, ZERO) + p

        for r1 in range(m):
            for c1 in range(n):
                if c[r1][c1]:
                    p2 = start / len(zeros_in_row[r1])
                    for c2 in zeros_in_row[r1]:
                        p3 = p2 / len(ones_in_col[c2])
                        for r2 in ones_in_col[c2]:
                            land(p3, r1, r2, c1, c2)
                else:
                    p2 = start / len(ones_in_col[c1])
                    for r2 in ones_in_col[c1]:
                        p3 = p2 / len(zeros_in_row[r2])
                        for c2 in zeros_in_row[r2]:
                            land(p3, r1, r2, c1, c2)
        rows.append(row)
    return TransitionMatrix(space, rows)


def build_rectangle_kernel(space: StateSpace) -> TransitionMatrix:
    """Rectangle Loop kernel, built by closed form and checked by enumeration."""
    closed = rectangle_kernel_closed_form(space)
    walked = rectangle_kernel_enumerated(space)
    if closed.rows != walked.rows:
        for i, (x, y) in enumerate(zip(closed.rows, walked.rows)):
            if x != y:
                raise KernelConsistencyError(
                    f"closed form and enumeration disagree on row {space.states[i].key()}: "
                    f"{x} != {y}")
    return closed


def build_curveball_kernel(space: StateSpace) -> TransitionMatrix:
    m, n = space.margins.shape
    if m < 2:
        raise ValueError("curveball needs at least 2 rows")
    pair_p = Fraction(1, math.comb(m, 2))
    rows = []
    for i, a in enumerate(space.states):
        c = a.cells
        row: dict[int, Fraction] = {}
        for x, y in combinations(range(m), 2):
            only_x = [k for k in range(n) if c[x, k] and not c[y, k]]
            only_y = [k for k in range(n) if c[y, k] and not c[x, k]]
            if len(only_x) > len(only_y):
                x, y, only_x, only_y = y, x, only_y, only_x
            if not only_x:
                row[i] = row.get(i, ZERO) + pair_p
                continue
            subsets = list(combinations(only_y, len(only_x)))
            p = pair_p / len(subsets)
            key = list(a.key())
            for k in only_x:
                key[x * n + k], key[y * n + k] = "0", "1"
            for v in subsets:
                traded = key[:]
                for k in v:
                    traded[x * n + k], traded[y * n + k] = "1", "0"
                j = space.position("".join(traded))
                row[j] = row.get(j, ZERO) + p
        rows.append(row)
    return TransitionMatrix(space, rows)


KERNEL_BUILDERS = {
    "swap": build_swap_kernel,
    "curveball": build_curveball_kernel,
    "rectangle-loop": build_rectangle_kernel,
}


def build_kernel(space: StateSpace, algorithm: str) -> TransitionMatrix:
    try:
        builder = KERNEL_BUILDERS[algorithm]
    except KeyError:
        raise ValueError(f"unknown algorithm {algorithm!r}") from None
    return builder(space)


class StationarityCheck(NamedTuple):
    stationary: bool
    residual: Fraction


def check_stationarity(p: TransitionMatrix) -> StationarityCheck:
    """Exact check that the uniform distribution is invariant under ``p``."""
    size = len(p)
    col = [ZERO] * size
    for row in p.rows:
        for j, v in row.items():
            col[j] += v
    pi = Fraction(1, size)
    residual = max((abs(s * pi - pi) for s in col), default=ZERO)
    return StationarityCheck(residual == 0, residual)


class PeskunResult(NamedTuple):
    dominates: bool
    witness: tuple[BinaryMatrix, BinaryMatrix] | None


def check_peskun_dominance(p1: TransitionMatrix, p2: TransitionMatrix) -> PeskunResult:
    """Whether ``p1`` dominates ``p2`` off the diagonal, with a witness if not."""
    if p1.states != p2.states:
        raise ValueError("kernels are defined on different state spaces")
    for i, (row1, row2) in enumerate(zip(p1.rows, p2.rows)):
        for j in sorted(set(row1) | set(row2)):
            if j != i and row1.get(j, ZERO) < row2.get(j, ZERO):
                return PeskunResult(False, (p1.states[i], p1.states[j]))
    return PeskunResult(True, None)


def is_symmetric(p: TransitionMatrix) -> bool:
    return all(p[j, i] == v for i, row in enumerate(p.rows) for j, v in row.items())


@dataclass
class TVCurve:
    """Worst-case total variation to uniform after ``k`` steps."""

    points: list[tuple[int, float]]

    @property
    def ks(self) -> list[int]:
        return [k for k, _ in self.points]

    @property
    def values(self) -> list[float]:
        return [tv for _, tv in self.points]

    def log10(self) -> list[float]:
        return [math.log10(tv) if tv > 0 else -math.inf for tv in self.values]


def tv_distance_curve(p: TransitionMatrix, k_max: int, k_min: int = 1) -> TVCurve:
    """``max_A 1/2 sum_B |P^k(A,B) - 1/|S||`` for ``k = k_min..k_max``."""
    mat = p.to_numpy()
    size = mat.shape[0]
    # track P^k - 1/|S| directly: P (P^k - J/|S|) = P^(k+1) - J/|S| since rows sum to 1,
    # and the deviation keeps relative precision long after P^k itself stops changing
    dev = np.eye(size) - 1.0 / size
    # with uniform stationarity every column of the deviation sums to 0; re-imposing
    # that stops round-off from feeding the eigenvalue-1 mode
    doubly = all(sum(col) == 1 for col in zip(*p.dense()))
    points = []
    for k in range(0, k_max + 1):
        if k > 0:
            dev = mat @ dev
            if doubly:
                dev -= dev.mean(axis=0)
        if k >= k_min:
            tv = 0.5 * np.abs(dev).sum(axis=1).max()
            points.append((k, float(min(1.0, max(0.0, tv)))))
    return TVCurve(points)
