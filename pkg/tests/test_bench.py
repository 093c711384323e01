from __future__ import annotations

import numpy as np
import pytest

from edgeplane.errors import SizeTooLarge, ValidationError
from edgeplane.pipeline.bench import multiply_arrays, run_multiply_benchmark


def test_hand_checked_product():
    a = np.array([1.0, 2.0, 3.0, 4.0])
    b = np.array([2.0, 2.0, 2.0, 2.0])
    assert multiply_arrays(a, b).tolist() == [2.0, 4.0, 6.0, 8.0]


def test_single_element():
    [row] = run_multiply_benchmark([1])
    assert row.size == 1 and row.elapsed_seconds >= 0.0


def test_products_match_scalar_loop_on_sampled_indices():
    # Independent of the in-harness spot check: recompute the full product
    # with a plain Python loop at small n.
    rng = np.random.default_rng(20230613)
    n = 1000
    a, b = rng.random(n), rng.random(n)
    product = multiply_arrays(a, b)
    for i in range(n):
        assert product[i] == float(a[i]) * float(b[i])


def test_checksum_deterministic_per_size():
    first = run_multiply_benchmark([10_000])
    second = run_multiply_benchmark([10_000])
    assert first[0].checksum == second[0].checksum


def test_sizes_validated():
    with pytest.raises(ValidationError):
        run_multiply_benchmark([0])
    with pytest.raises(ValidationError):
        run_multiply_benchmark([-5])


def test_size_cap_enforced():
    with pytest.raises(SizeTooLarge):
        run_multiply_benchmark([10_000_001])
    with pytest.raises(SizeTooLarge):
        run_multiply_benchmark([200], max_size=100)


def test_larger_sizes_cost_more():
    rows = {row.size: row.elapsed_seconds for row in run_multiply_benchmark([1_000, 10_000_000])}
    assert rows[10_000_000] > rows[1_000]
