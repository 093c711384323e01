"""Fixture acquisition: replay recorded sensor rows onto the raw topic.

Fixtures are comma-separated text, one row per line with exactly 7 numeric
acceleration columns; lines starting with ``#`` are comments. Each row is
published as one message. Real-time mode paces rows by sleeping the
configured interval; virtual mode advances a simulated clock instantly so
tests replay thousands of rows without waiting.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass
from pathlib import Path

from ..brokers import BrokerHub
from ..errors import FixtureUnreadable, MalformedRow, ValidationError
from .messages import CHANNEL_COUNT, TOPIC_RAW, RawRow, encode_raw_row

MODES = ("realtime", "virtual")


@dataclass(frozen=True)
class ReplaySummary:
    rows_published: int
    duration_ms: float


def read_fixture(path: str | Path) -> list[tuple[float, ...]]:
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = []
            for line_no, record in enumerate(csv.reader(fh), start=1):
                if not record or (record[0].lstrip().startswith("#")):
                    continue
                if len(record) != CHANNEL_COUNT:
                    raise MalformedRow(
                        f"line {line_no}: expected {CHANNEL_COUNT} channels, got {len(record)}"
                    )
                try:
                    rows.append(tuple(float(value) for value in record))
                except ValueError:
                    raise MalformedRow(f"line {line_no}: non-numeric channel value")
            return rows
    except OSError as exc:
        raise FixtureUnreadable(f"cannot read fixture {path}: {exc}") from exc


def replay_fixture(
    hub: BrokerHub,
    path: str | Path,
    interval_ms: float = 1.0,
    mode: str = "realtime",
) -> ReplaySummary:
    """Publish one raw-row message per fixture row, spaced ``interval_ms`` apart."""
    if mode not in MODES:
        raise ValidationError(f"mode must be one of {MODES}")
    if not interval_ms > 0:
        raise ValidationError("interval_ms must be positive")
    rows = read_fixture(path)
    clock_ms = 0.0
    for index, channels in enumerate(rows):
        if mode == "realtime" and index:
            time.sleep(interval_ms / 1000.0)
        clock_ms = index * interval_ms
        row = RawRow(timestamp_ms=clock_ms, channels=channels)
        row.validate()
        hub.publish("mqtt", TOPIC_RAW, encode_raw_row(row))
    return ReplaySummary(rows_published=len(rows), duration_ms=clock_ms)
