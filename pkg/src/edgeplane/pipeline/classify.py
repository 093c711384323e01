"""Batched classification of cleaned samples into bumps and depressions.

A batch is exactly 500 samples. With batch mean mu and standard deviation
sigma (population form, over all 500 samples), an event is a maximal
contiguous run of samples deviating beyond k*sigma from the mean: above it a
bump, below it a depression. Each event's confidence is
``min(1, |extremum - mu| / (2*k*sigma))`` so a threshold-grazing run scores
about 0.5 and extreme runs saturate at 1. A constant batch (sigma == 0) has
no deviating samples and therefore no events.

The detector is deterministic on purpose: it stands in for the consortium's
learned model behind the same batch-in, events-out interface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from ..errors import BatchSizeMismatch, ValidationError
from .messages import CleanSample

BATCH_SIZE = 500

KIND_BUMP = "bump"
KIND_DEPRESSION = "depression"


@dataclass(frozen=True)
class SampleBatch:
    batch_index: int
    samples: tuple[CleanSample, ...]

    def validate(self) -> None:
        if len(self.samples) != BATCH_SIZE:
            raise BatchSizeMismatch(
                f"batch {self.batch_index} holds {len(self.samples)} samples, "
                f"expected {BATCH_SIZE}"
            )
        times = [s.timestamp_ms for s in self.samples]
        if any(b < a for a, b in zip(times, times[1:])):
            raise ValidationError("batch timestamps must be non-decreasing")


@dataclass(frozen=True)
class ClassifiedEvent:
    batch_index: int
    start_offset: int
    end_offset: int
    kind: str
    confidence: float

    def as_dict(self) -> dict:
        return {
            "batch_index": self.batch_index,
            "start_offset": self.start_offset,
            "end_offset": self.end_offset,
            "kind": self.kind,
            "confidence": self.confidence,
        }


def classify_batch(batch: SampleBatch, k_sigma: float = 3.0) -> list[ClassifiedEvent]:
    batch.validate()
    if not k_sigma > 0:
        raise ValidationError("k_sigma must be positive")
    values = [s.combined for s in batch.samples]
    mean = math.fsum(values) / BATCH_SIZE
    sigma = math.sqrt(math.fsum((v - mean) ** 2 for v in values) / BATCH_SIZE)
    threshold = k_sigma * sigma
    if sigma == 0.0:
        return []

    events: list[ClassifiedEvent] = []
    run_start: int | None = None
    run_kind = ""
    run_extremum = 0.0

    def flush(end_offset: int) -> None:
        confidence = min(1.0, run_extremum / (2.0 * threshold))
        events.append(ClassifiedEvent(
            batch_index=batch.batch_index,
            start_offset=run_start,
            end_offset=end_offset,
            kind=run_kind,
            confidence=confidence,
        ))

    for offset, value in enumerate(values):
        deviation = value - mean
        if deviation > threshold:
            kind = KIND_BUMP
        elif deviation < -threshold:
            kind = KIND_DEPRESSION
        else:
            kind = ""
        if kind != run_kind:
            if run_kind:
                flush(offset - 1)
            run_start, run_kind, run_extremum = offset, kind, 0.0
        if kind:
            run_extremum = max(run_extremum, abs(deviation))
    if run_kind:
        flush(BATCH_SIZE - 1)
    return events


def batch_from_values(batch_index: int, values: Sequence[float],
                      start_ms: float = 0.0, step_ms: float = 1.0) -> SampleBatch:
    """Convenience wrapper for building batches out of bare value sequences."""
    samples = tuple(
        CleanSample(timestamp_ms=start_ms + i * step_ms, combined=v)
        for i, v in enumerate(values)
    )
    return SampleBatch(batch_index=batch_index, samples=samples)
