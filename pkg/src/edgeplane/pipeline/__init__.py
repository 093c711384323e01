"""Sensor-data pipeline: fixture replay, cleaning, batched classification,
visualization snapshots, and the array-multiply benchmark harness."""

from .bench import run_multiply_benchmark
from .classify import BATCH_SIZE, ClassifiedEvent, SampleBatch, classify_batch
from .cleaning import CleaningWorker, clean_row
from .events import EventStore
from .messages import (
    TOPIC_CLASSIFY,
    TOPIC_PROCESSED,
    TOPIC_RAW,
    CleanSample,
    RawRow,
)
from .pool import ClassifierPool
from .replay import replay_fixture
from .runtime import PipelineRuntime

__all__ = [
    "BATCH_SIZE",
    "ClassifiedEvent",
    "ClassifierPool",
    "CleanSample",
    "CleaningWorker",
    "EventStore",
    "PipelineRuntime",
    "RawRow",
    "SampleBatch",
    "TOPIC_CLASSIFY",
    "TOPIC_PROCESSED",
    "TOPIC_RAW",
    "classify_batch",
    "clean_row",
    "replay_fixture",
    "run_multiply_benchmark",
]
