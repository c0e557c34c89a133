"""Embedded datasets."""

from __future__ import annotations

import math
from pathlib import Path

from .matrix import BinaryMatrix, MatrixFormatError, checkerboard_quads, from_grid, read_matrix

# Darwin's finches: 13 species (rows) x 17 Galapagos islands (columns A..Q)
FINCH_GRID = (
    (0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 0, 1, 1, 1, 1, 1, 1),
    (1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 1, 0, 1, 1, 0, 0),
    (1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 1, 1, 0, 0),
    (0, 0, 1, 1, 1, 0, 0, 1, 0, 1, 0, 1, 1, 0, 1, 1, 1),
    (1, 1, 1, 0, 1, 1, 1, 1, 1, 1, 0, 1, 0, 1, 1, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 0, 0),
    (0, 0, 1, 1, 1, 1, 1, 1, 1, 0, 0, 1, 0, 1, 1, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0),
    (0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 0, 1, 0, 0, 1, 0, 0),
    (0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 0, 1, 0, 1, 1, 0, 0),
    (0, 0, 1, 1, 1, 0, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0),
    (0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1),
)

DATASETS = ("finch",)


def swappable_fraction(a: BinaryMatrix) -> float:
    """Share of all 2x2 submatrices that are checkerboard units."""
    m, n = a.shape
    return len(checkerboard_quads(a)) / (math.comb(m, 2) * math.comb(n, 2))


def finch() -> BinaryMatrix:
    a = from_grid(FINCH_GRID)
    frac = swappable_fraction(a)
    if not 0.02 <= frac <= 0.04:
        raise AssertionError(f"finch matrix self-check failed: swappable fraction {frac:.4f}")
    return a


def load_dataset(name_or_path: str | Path) -> BinaryMatrix:
    """An embedded dataset by name, otherwise a matrix file in text format."""
    if str(name_or_path) == "finch":
        return finch()
    path = Path(name_or_path)
    if not path.is_file():
        raise MatrixFormatError(
            f"{path}: no such file (embedded datasets: {', '.join(DATASETS)})")
    return read_matrix(path)
