"""Cleaning stage: combine the 7 acceleration channels into one measurement.

The combination is the root mean square sqrt((x1^2 + ... + x7^2) / 7), which
is non-negative, bounded by the smallest and largest channel magnitudes, and
keeps the row's timestamp.
"""

from __future__ import annotations

import math
import threading

from ..brokers import BrokerHub
from ..errors import MalformedRow, NonFiniteInput
from .events import EventStore
from .messages import (
    TOPIC_PROCESSED,
    TOPIC_RAW,
    CleanSample,
    RawRow,
    decode_raw_row,
    encode_clean_sample,
)

_POLL_S = 0.02


def clean_row(row: RawRow) -> CleanSample:
    row.validate()
    combined = math.sqrt(math.fsum(x * x for x in row.channels) / len(row.channels))
    return CleanSample(timestamp_ms=row.timestamp_ms, combined=combined)


class CleaningWorker(threading.Thread):
    """Consume raw rows, publish cleaned samples onto the processed topic.

    Undecodable payloads are counted as skipped and dropped; the stream keeps
    flowing.
    """

    def __init__(self, hub: BrokerHub, event_store: EventStore):
        super().__init__(name="pipeline-cleaning", daemon=True)
        self._hub = hub
        self._store = event_store
        self._sub = hub.subscribe("mqtt", TOPIC_RAW)
        self._stop_requested = threading.Event()

    def run(self) -> None:
        while True:
            message = self._sub.get(timeout=_POLL_S)
            if message is None:
                if self._stop_requested.is_set():
                    return
                continue
            try:
                try:
                    row = decode_raw_row(message.payload)
                except (MalformedRow, NonFiniteInput):
                    self._store.record_skipped()
                    continue
                sample = clean_row(row)
                self._hub.publish("mqtt", TOPIC_PROCESSED, encode_clean_sample(sample))
            finally:
                self._sub.task_done()

    def pending(self) -> int:
        return self._sub.pending()

    def shutdown(self) -> None:
        self._stop_requested.set()
        self._sub.close()
        self.join(timeout=5.0)
