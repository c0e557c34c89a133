import itertools

import numpy as np
import pytest

from margin_mcmc.enumeration import enumerate_state_space
from margin_mcmc.matrix import BinaryMatrix, Margins, from_grid

# the five 3x3 matrices with row and column sums [1, 2, 1], labelled A..E
REFERENCE_STATES = {
    "A": [[0, 1, 0], [1, 0, 1], [0, 1, 0]],
    "B": [[0, 1, 0], [1, 1, 0], [0, 0, 1]],
    "C": [[1, 0, 0], [0, 1, 1], [0, 1, 0]],
    "D": [[0, 1, 0], [0, 1, 1], [1, 0, 0]],
    "E": [[0, 0, 1], [1, 1, 0], [0, 1, 0]],
}


@pytest.fixture(scope="session")
def reference_states():
    return [from_grid(REFERENCE_STATES[k]) for k in "ABCDE"]


@pytest.fixture(scope="session")
def reference_space():
    return enumerate_state_space(Margins.of([1, 2, 1], [1, 2, 1]))


def all_grids(m, n):
    """Every m x n 0/1 matrix, as numpy arrays (brute-force oracle)."""
    for bits in itertools.product((0, 1), repeat=m * n):
        yield np.array(bits, dtype=np.uint8).reshape(m, n)


def brute_force_counts(m, n):
    """Map margins -> number of m x n binary matrices having them."""
    counts = {}
    for g in all_grids(m, n):
        key = Margins(tuple(int(x) for x in g.sum(1)), tuple(int(x) for x in g.sum(0)))
        counts[key] = counts.get(key, 0) + 1
    return counts


def random_matrix(rng, m, n, p=0.5):
    return BinaryMatrix((rng.random((m, n)) < p).astype(np.uint8))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
