"""Topic names and payload codecs for the pipeline stages.

Wire format (stable within a schema version): compact JSON objects.
A raw row is ``{"t": <ms>, "a": [<7 accelerations>]}``; a cleaned sample is
``{"t": <ms>, "v": <combined acceleration>}``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from ..errors import MalformedRow, NonFiniteInput

TOPIC_RAW = "raw"
TOPIC_PROCESSED = "processed"
TOPIC_CLASSIFY = "classify"

CHANNEL_COUNT = 7


@dataclass(frozen=True)
class RawRow:
    timestamp_ms: float
    channels: tuple[float, ...]

    def validate(self) -> None:
        if len(self.channels) != CHANNEL_COUNT:
            raise MalformedRow(
                f"expected {CHANNEL_COUNT} channels, got {len(self.channels)}"
            )
        if not all(math.isfinite(value) for value in self.channels):
            raise NonFiniteInput("channel values must be finite")


@dataclass(frozen=True)
class CleanSample:
    timestamp_ms: float
    combined: float


def encode_raw_row(row: RawRow) -> bytes:
    return json.dumps(
        {"t": row.timestamp_ms, "a": list(row.channels)}, separators=(",", ":")
    ).encode()


def decode_raw_row(payload: bytes) -> RawRow:
    try:
        doc = json.loads(payload)
        channels = tuple(float(v) for v in doc["a"])
        row = RawRow(timestamp_ms=float(doc["t"]), channels=channels)
    except (ValueError, KeyError, TypeError) as exc:
        raise MalformedRow(f"undecodable raw row payload: {exc}") from exc
    row.validate()
    return row


def encode_clean_sample(sample: CleanSample) -> bytes:
    return json.dumps(
        {"t": sample.timestamp_ms, "v": sample.combined}, separators=(",", ":")
    ).encode()


def decode_clean_sample(payload: bytes) -> CleanSample:
    try:
        doc = json.loads(payload)
        sample = CleanSample(timestamp_ms=float(doc["t"]), combined=float(doc["v"]))
    except (ValueError, KeyError, TypeError) as exc:
        raise MalformedRow(f"undecodable sample payload: {exc}") from exc
    if not (math.isfinite(sample.combined) and math.isfinite(sample.timestamp_ms)):
        raise MalformedRow("sample fields must be finite")
    return sample
