"""Array-multiply benchmark harness.

Times elementwise products of two seeded random arrays across a range of
sizes. Absolute timings are hardware-bound and only useful relative to each
other on the same run; correctness is what gets checked, by comparing a
sampled subset of each product against a plain scalar loop.
"""

from __future__ import annotations

import hashlib
import random
import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import SizeTooLarge, ValidationError

DEFAULT_MAX_SIZE = 10_000_000
_RNG_SEED = 20230613
_SAMPLE_CHECKS = 64


@dataclass(frozen=True)
class BenchRow:
    size: int
    elapsed_seconds: float
    checksum: str


def multiply_arrays(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.multiply(a, b)


def scalar_multiply_at(a: Sequence[float], b: Sequence[float], index: int) -> float:
    """Independent single-element product used to spot-check the array path."""
    return float(a[index]) * float(b[index])


def run_multiply_benchmark(
    sizes: Sequence[int], max_size: int = DEFAULT_MAX_SIZE
) -> list[BenchRow]:
    for size in sizes:
        if not isinstance(size, int) or size < 1:
            raise ValidationError(f"sizes must be positive integers, got {size!r}")
        if size > max_size:
            raise SizeTooLarge(f"size {size} exceeds the configured cap {max_size}")
    rows = []
    for size in sizes:
        rng = np.random.default_rng(_RNG_SEED)
        a = rng.random(size)
        b = rng.random(size)
        started = time.perf_counter()
        product = multiply_arrays(a, b)
        elapsed = time.perf_counter() - started
        _spot_check(a, b, product)
        checksum = hashlib.sha256(product.tobytes()).hexdigest()[:16]
        rows.append(BenchRow(size=size, elapsed_seconds=elapsed, checksum=checksum))
    return rows


def _spot_check(a: np.ndarray, b: np.ndarray, product: np.ndarray) -> None:
    picker = random.Random(_RNG_SEED)
    count = min(len(product), _SAMPLE_CHECKS)
    for index in picker.sample(range(len(product)), count):
        expected = scalar_multiply_at(a, b, index)
        if product[index] != expected:
            raise AssertionError(
                f"product mismatch at index {index}: {product[index]!r} != {expected!r}"
            )
