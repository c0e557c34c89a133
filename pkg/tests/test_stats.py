import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_matrix
from margin_mcmc.chains import run_chain
from margin_mcmc.matrix import BinaryMatrix, from_grid
from margin_mcmc.datasets import finch
from margin_mcmc.rng import RngStream
from margin_mcmc.stats import (StatTrace, bernoulli_matrix, benchmark, estimate_statistic,
                               perturbation_score, s_bar_squared, swap_efficiency_report)


def s2_by_loops(grid):
    m = len(grid)
    total = 0
    for i, j in itertools.permutations(range(m), 2):
        s = sum(x * y for x, y in zip(grid[i], grid[j]))
        total += s * s
    return total / (m * (m - 1))


def test_s2_identity():
    assert s_bar_squared(from_grid([[1, 0], [0, 1]])) == 0


def test_s2_reference_a(reference_states):
    grid = reference_states[0].tolist()
    assert s2_by_loops(grid) == pytest.approx(1 / 3)
    assert s_bar_squared(reference_states[0]) == pytest.approx(1 / 3, abs=1e-15)


def test_s2_needs_two_rows():
    with pytest.raises(ValueError):
        s_bar_squared(from_grid([[1, 0]]))


@settings(max_examples=40)
@given(st.integers(2, 8), st.integers(1, 8), st.integers(0, 2**31), st.randoms())
def test_s2_invariances(m, n, seed, rnd):
    a = random_matrix(np.random.default_rng(seed), m, n)
    base = s_bar_squared(a)
    assert base == pytest.approx(s2_by_loops(a.tolist()))
    cols, rows = list(range(n)), list(range(m))
    rnd.shuffle(cols)
    rnd.shuffle(rows)
    assert s_bar_squared(BinaryMatrix(a.cells[:, cols])) == base
    assert s_bar_squared(BinaryMatrix(a.cells[rows][:, cols])) == pytest.approx(base)


def test_perturbation_score():
    a = from_grid([[1, 0], [0, 1]])
    assert perturbation_score(a, a) == 0
    assert perturbation_score(from_grid([[0, 1], [1, 0]]), a) == 1
    with pytest.raises(ValueError):
        perturbation_score(a, from_grid([[1, 0, 0], [0, 1, 0]]))


def test_perturbation_one_swap_10x10():
    a = from_grid(np.eye(10, dtype=int).tolist())
    b = a.cells.copy()
    b[0, 0] = b[1, 1] = 0
    b[0, 1] = b[1, 0] = 1
    assert perturbation_score(BinaryMatrix(b), a) == pytest.approx(4 / 100)


@pytest.mark.parametrize("algorithm", ["swap", "rectangle-loop"])
def test_perturbation_bounded_by_swaps(algorithm):
    a = random_matrix(np.random.default_rng(1), 10, 12, 0.3)
    run = run_chain(a, algorithm, 2000, RngStream(3))
    k = run.successful_swaps
    assert perturbation_score(run.final, a) <= min(1.0, 4 * k / (10 * 12))


@settings(max_examples=50)
@given(st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=1, max_size=200))
def test_trace_running_moments_match_batch(values):
    trace = StatTrace("x")
    for t, v in enumerate(values):
        trace.add(t, v)
    for k in range(1, len(values) + 1):
        batch = np.array(values[:k])
        scale = max(1.0, np.abs(batch).max())
        assert trace.running_mean[k - 1] == pytest.approx(batch.mean(), rel=1e-9, abs=1e-9 * scale)
        std = batch.std(ddof=1) if k > 1 else 0.0
        assert trace.running_std[k - 1] == pytest.approx(std, rel=1e-9, abs=1e-9 * scale)


def test_trace_requires_increasing_iterations():
    trace = StatTrace("x")
    trace.add(5, 1.0)
    with pytest.raises(ValueError):
        trace.add(5, 2.0)


def test_constant_statistic_has_zero_variance():
    a = random_matrix(np.random.default_rng(4), 6, 7, 0.5)
    trace = estimate_statistic(a, "curveball", 500, RngStream(0), statistic="ones")
    assert len(trace) == 500
    assert trace.std == 0
    assert trace.mean == a.cells.sum()


def test_estimate_respects_burn_in_and_thin(reference_states):
    trace = estimate_statistic(reference_states[0], "swap", 100, RngStream(0), burn_in=20, thin=10)
    assert trace.iterations == list(range(30, 101, 10))


def test_efficiency_report_zero_iterations(reference_states):
    rep = swap_efficiency_report(run_chain(reference_states[0], "swap", 0, RngStream(0)), 0.0)
    assert rep.swaps == 0 and rep.time_per_swap is None


def test_bernoulli_matrix_is_seeded():
    a = bernoulli_matrix(20, 30, 0.3, RngStream(7))
    assert a == bernoulli_matrix(20, 30, 0.3, RngStream(7))
    assert 0.2 < a.cells.mean() < 0.4


def test_benchmark_half_fill_rectangle_loop():
    rows = benchmark(100, 100, [0.5], 10_000, seed=11, algorithms=("rectangle-loop",))
    assert 4500 <= rows[0].swaps <= 5600


def test_benchmark_sparse_swap_chain():
    rows = benchmark(100, 100, [0.01], 10_000, seed=11, algorithms=("swap",))
    assert 0 <= rows[0].swaps <= 30


def test_finch_co_occurrence_is_significant_against_the_null():
    a = finch()
    observed = s_bar_squared(a)
    trace = estimate_statistic(a, "rectangle-loop", 20_000, RngStream(2024))
    assert observed > trace.mean + 3 * trace.std
