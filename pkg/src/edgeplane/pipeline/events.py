"""Event store backing the visualization endpoint.

Holds the recent-sample ring buffer, the classified-event table, and the
skipped-payload counter. Batch results may complete out of order under
concurrent classification; they are buffered and appended strictly in
batch_index order so readers never observe a torn or reordered table.
"""

from __future__ import annotations

import threading
from collections import deque

from .classify import ClassifiedEvent
from .messages import CleanSample

DEFAULT_WINDOW = 5000


class EventStore:
    def __init__(self, window_size: int = DEFAULT_WINDOW):
        self._lock = threading.Lock()
        self._window: deque[CleanSample] = deque(maxlen=window_size)
        self._events: list[ClassifiedEvent] = []
        self._skipped = 0
        self._next_batch = 0
        self._held: dict[int, list[ClassifiedEvent]] = {}

    def add_sample(self, sample: CleanSample) -> None:
        with self._lock:
            self._window.append(sample)

    def record_skipped(self) -> None:
        with self._lock:
            self._skipped += 1

    def append_batch(self, batch_index: int, events: list[ClassifiedEvent]) -> None:
        with self._lock:
            self._held[batch_index] = events
            while self._next_batch in self._held:
                self._events.extend(self._held.pop(self._next_batch))
                self._next_batch += 1

    def batches_completed(self) -> int:
        with self._lock:
            return self._next_batch

    def pending_batches(self) -> int:
        with self._lock:
            return len(self._held)

    def snapshot(self) -> dict:
        with self._lock:
            return {
                "window": [
                    {"t": s.timestamp_ms, "v": s.combined} for s in self._window
                ],
                "events": [e.as_dict() for e in self._events],
                "skipped_count": self._skipped,
            }
