"""Binary matrices with cached margins, checkerboard units and swaps."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

import numpy as np


class MatrixFormatError(ValueError):
    """Raised for malformed matrix input (non-binary cells, ragged rows)."""


class Margins(NamedTuple):
    """Row sums ``r`` and column sums ``c`` of a binary matrix problem."""

    r: tuple[int, ...]
    c: tuple[int, ...]

    @classmethod
    def of(cls, r: Iterable[int], c: Iterable[int]) -> "Margins":
        r = tuple(int(x) for x in r)
        c = tuple(int(x) for x in c)
        if any(x < 0 for x in r + c):
            raise ValueError("margins must be nonnegative")
        return cls(r, c)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.r), len(self.c)


class SwapQuad(NamedTuple):
    """Two rows and two columns addressing a 2x2 submatrix."""

    r1: int
    r2: int
    c1: int
    c2: int


class BinaryMatrix:
    """Immutable dense 0/1 matrix with cached row and column sums.

    Equality and hashing go through :func:`canonical_key`, so two matrices
    with the same cells are interchangeable as dictionary keys.
    """

    __slots__ = ("_cells", "row_sums", "col_sums", "_key")

    def __init__(self, cells: np.ndarray):
        cells = np.array(cells, dtype=np.uint8, copy=True)
        cells.setflags(write=False)
        self._cells = cells
        self.row_sums = tuple(int(x) for x in cells.sum(axis=1))
        self.col_sums = tuple(int(x) for x in cells.sum(axis=0))
        self._key = None

    @property
    def cells(self) -> np.ndarray:
        return self._cells

    @property
    def m(self) -> int:
        return self._cells.shape[0]

    @property
    def n(self) -> int:
        return self._cells.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._cells.shape

    @property
    def margins(self) -> Margins:
        return Margins(self.row_sums, self.col_sums)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return int(self._cells[ij])

    def tolist(self) -> list[list[int]]:
        return self._cells.tolist()

    def key(self) -> str:
        if self._key is None:
            self._key = canonical_key(self)
        return self._key

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryMatrix):
            return NotImplemented
        return self.shape == other.shape and self.key() == other.key()

    def __hash__(self) -> int:
        return hash((self.shape, self.key()))

    def __repr__(self) -> str:
        return f"BinaryMatrix({self.tolist()})"

    def __str__(self) -> str:
        return format_matrix(self)


def from_grid(grid: Sequence[Sequence[int]]) -> BinaryMatrix:
    """Validate a rectangular grid of 0/1 integers and wrap it."""
    rows = [list(row) for row in grid]
    if not rows or not rows[0]:
        raise MatrixFormatError("matrix must have at least one row and one column")
    n = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != n:
            raise MatrixFormatError(f"ragged rows: row {i} has {len(row)} cells, expected {n}")
        for j, v in enumerate(row):
            if v not in (0, 1):
                raise MatrixFormatError(f"non-binary entry {v!r} at ({i},{j})")
    return BinaryMatrix(np.array(rows, dtype=np.uint8))


def _check_quad(a: BinaryMatrix, q: SwapQuad) -> None:
    m, n = a.shape
    if not (0 <= q.r1 < m and 0 <= q.r2 < m and 0 <= q.c1 < n and 0 <= q.c2 < n):
        raise IndexError(f"quad {tuple(q)} out of bounds for {m}x{n} matrix")
    if q.r1 == q.r2 or q.c1 == q.c2:
        raise ValueError(f"quad {tuple(q)} needs distinct rows and distinct columns")


def is_checkerboard(a: BinaryMatrix, q: SwapQuad) -> bool:
    _check_quad(a, q)
    c = a.cells
    x11, x12 = int(c[q.r1, q.c1]), int(c[q.r1, q.c2])
    x21, x22 = int(c[q.r2, q.c1]), int(c[q.r2, q.c2])
    return x11 == x22 and x12 == x21 and x11 != x12


def apply_swap(a: BinaryMatrix, q: SwapQuad) -> BinaryMatrix:
    """Return a copy of ``a`` with the checkerboard unit at ``q`` flipped."""
    if not is_checkerboard(a, q):
        raise ValueError(f"quad {tuple(q)} is not a checkerboard unit")
    cells = a.cells.copy()
    for i in (q.r1, q.r2):
        for j in (q.c1, q.c2):
            cells[i, j] ^= 1
    return BinaryMatrix(cells)


def canonical_key(a: BinaryMatrix) -> str:
    """Row-major bit string; orders matrices of one shape totally."""
    return "".join("1" if v else "0" for v in a.cells.ravel().tolist())


def checkerboard_quads(a: BinaryMatrix) -> list[SwapQuad]:
    """All quads (r1<r2, c1<c2) forming a checkerboard unit in ``a``."""
    c = a.cells
    m, n = a.shape
    quads = []
    for r1 in range(m - 1):
        for r2 in range(r1 + 1, m):
            # columns where the two rows differ, split by which row holds the 1
            diff = np.flatnonzero(c[r1] != c[r2]).tolist()
            for x in range(len(diff)):
                for y in range(x + 1, len(diff)):
                    j1, j2 = diff[x], diff[y]
                    if c[r1, j1] != c[r1, j2]:
                        quads.append(SwapQuad(r1, r2, j1, j2))
    return quads


def format_matrix(a: BinaryMatrix) -> str:
    return "\n".join(" ".join(str(v) for v in row) for row in a.tolist())


def parse_matrix(text: str, source: str = "<text>") -> BinaryMatrix:
    """Parse the whitespace-separated 0/1 text format, one row per line."""
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        tokens = line.split()
        if not tokens:
            continue
        row = []
        for col, tok in enumerate(tokens, start=1):
            if tok not in ("0", "1"):
                raise MatrixFormatError(
                    f"{source}: line {lineno}, column {col}: expected 0 or 1, got {tok!r}")
            row.append(int(tok))
        if rows and len(row) != len(rows[0]):
            raise MatrixFormatError(
                f"{source}: line {lineno}: {len(row)} cells, expected {len(rows[0])}")
        rows.append(row)
    if not rows:
        raise MatrixFormatError(f"{source}: empty matrix")
    return from_grid(rows)


def parse_matrices(text: str, source: str = "<text>") -> list[BinaryMatrix]:
    """Parse several matrices separated by blank lines."""
    blocks, current = [], []
    for line in text.splitlines():
        if line.strip():
            current.append(line)
        elif current:
            blocks.append("\n".join(current))
            current = []
    if current:
        blocks.append("\n".join(current))
    return [parse_matrix(b, source) for b in blocks]


def read_matrix(path: str | Path) -> BinaryMatrix:
    path = Path(path)
    return parse_matrix(path.read_text(), str(path))


def write_matrices(path: str | Path, matrices: Iterable[BinaryMatrix]) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write("\n\n".join(format_matrix(a) for a in matrices))
        fh.write("\n")


class MutableGrid:
    """In-place working copy of a binary matrix used by the chain steppers.

    Besides the cells it keeps, for every row and column, the positions of
    its 1s and 0s in unordered lists with O(1) removal, so that "a random 0
    of row i" or "a random 1 of column j" costs one draw.
    """

    __slots__ = ("m", "n", "cells", "row_ones", "row_zeros", "col_ones", "col_zeros",
                 "_rpos", "_cpos")

    def __init__(self, a: BinaryMatrix):
        self.m, self.n = a.shape
        self.cells = [row[:] for row in a.tolist()]
        self.row_ones = [[] for _ in range(self.m)]
        self.row_zeros = [[] for _ in range(self.m)]
        self.col_ones = [[] for _ in range(self.n)]
        self.col_zeros = [[] for _ in range(self.n)]
        # _rpos[i][j]: index of j inside row_ones[i] or row_zeros[i]
        self._rpos = [[0] * self.n for _ in range(self.m)]
        self._cpos = [[0] * self.m for _ in range(self.n)]
        for i in range(self.m):
            for j in range(self.n):
                rl = self.row_ones[i] if self.cells[i][j] else self.row_zeros[i]
                self._rpos[i][j] = len(rl)
                rl.append(j)
                cl = self.col_ones[j] if self.cells[i][j] else self.col_zeros[j]
                self._cpos[j][i] = len(cl)
                cl.append(i)

    @staticmethod
    def _move(src: list, dst: list, pos: list, x: int) -> None:
        k = pos[x]
        last = src.pop()
        if last != x:
            src[k] = last
            pos[last] = k
        pos[x] = len(dst)
        dst.append(x)

    def toggle(self, i: int, j: int) -> None:
        """Flip one cell. Margins are only preserved by balanced sets of flips."""
        if self.cells[i][j]:
            self.cells[i][j] = 0
            self._move(self.row_ones[i], self.row_zeros[i], self._rpos[i], j)
            self._move(self.col_ones[j], self.col_zeros[j], self._cpos[j], i)
        else:
            self.cells[i][j] = 1
            self._move(self.row_zeros[i], self.row_ones[i], self._rpos[i], j)
            self._move(self.col_zeros[j], self.col_ones[j], self._cpos[j], i)

    def row_sum(self, i: int) -> int:
        return len(self.row_ones[i])

    def col_sum(self, j: int) -> int:
        return len(self.col_ones[j])

    def key(self) -> str:
        return "".join("1" if v else "0" for row in self.cells for v in row)

    def snapshot(self) -> BinaryMatrix:
        return BinaryMatrix(np.array(self.cells, dtype=np.uint8))
