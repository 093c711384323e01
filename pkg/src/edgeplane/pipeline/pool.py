"""Classification consumer with bounded concurrency.

Cleaned samples are consumed from the kafka-style classify topic and
buffered; every time the 500-sample threshold fills, a worker thread is
spawned for that batch. A counting semaphore caps how many classifications
run at once (default 1), the same acquire/classify/release shape around each
worker's body. Malformed payloads are counted and skipped.
"""

from __future__ import annotations

import threading

from ..brokers import BrokerHub
from ..errors import MalformedRow
from .classify import BATCH_SIZE, SampleBatch, classify_batch
from .events import EventStore
from .messages import TOPIC_CLASSIFY, CleanSample, decode_clean_sample

_POLL_S = 0.02


class _ClassificationWorker(threading.Thread):
    def __init__(self, pool: "ClassifierPool", batch: SampleBatch):
        super().__init__(name=f"classify-{batch.batch_index}", daemon=True)
        self._pool = pool
        self._batch = batch

    def run(self) -> None:
        pool = self._pool
        pool._semaphore.acquire()
        try:
            pool._note_started()
            events = classify_batch(self._batch, k_sigma=pool.k_sigma)
            pool.event_store.append_batch(self._batch.batch_index, events)
        finally:
            pool._note_finished()
            pool._semaphore.release()


class ClassifierPool:
    def __init__(
        self,
        hub: BrokerHub,
        event_store: EventStore,
        max_concurrent: int = 1,
        k_sigma: float = 3.0,
        batch_size: int = BATCH_SIZE,
    ):
        if max_concurrent < 1:
            raise ValueError("max_concurrent must be positive")
        self.event_store = event_store
        self.k_sigma = k_sigma
        self.batch_size = batch_size
        self._semaphore = threading.Semaphore(max_concurrent)
        self._sub = hub.subscribe("kafka", TOPIC_CLASSIFY)
        self._buffer: list[CleanSample] = []
        self._batch_count = 0
        self._stop = threading.Event()
        self._workers: list[_ClassificationWorker] = []
        self._gauge_lock = threading.Lock()
        self._in_flight = 0
        self.max_in_flight_observed = 0
        self._consumer = threading.Thread(
            target=self._consume, name="pipeline-classifier", daemon=True
        )
        self._consumer.start()

    def _consume(self) -> None:
        while True:
            message = self._sub.get(timeout=_POLL_S)
            if message is None:
                if self._stop.is_set():
                    return
                continue
            try:
                try:
                    sample = decode_clean_sample(message.payload)
                except MalformedRow:
                    self.event_store.record_skipped()
                    continue
                self.event_store.add_sample(sample)
                self._buffer.append(sample)
                if len(self._buffer) >= self.batch_size:
                    batch = SampleBatch(
                        batch_index=self._batch_count,
                        samples=tuple(self._buffer[: self.batch_size]),
                    )
                    self._buffer = self._buffer[self.batch_size:]
                    self._batch_count += 1
                    worker = _ClassificationWorker(self, batch)
                    self._workers.append(worker)
                    worker.start()
            finally:
                self._sub.task_done()

    def _note_started(self) -> None:
        with self._gauge_lock:
            self._in_flight += 1
            self.max_in_flight_observed = max(self.max_in_flight_observed, self._in_flight)

    def _note_finished(self) -> None:
        with self._gauge_lock:
            self._in_flight -= 1

    def buffered_samples(self) -> int:
        return len(self._buffer)

    def batches_dispatched(self) -> int:
        return self._batch_count

    def wait_idle(self, timeout: float = 10.0) -> bool:
        """True once the consumer queue is drained and every dispatched batch
        has landed in the event store."""
        done = threading.Event()
        timer = threading.Timer(timeout, done.set)
        timer.start()
        try:
            while not done.is_set():
                with self._gauge_lock:
                    in_flight = self._in_flight
                if (
                    self._sub.pending() == 0
                    and in_flight == 0
                    and self.event_store.pending_batches() == 0
                    and self.event_store.batches_completed() == self._batch_count
                ):
                    return True
                done.wait(_POLL_S)
            return False
        finally:
            timer.cancel()

    def shutdown(self) -> None:
        self._stop.set()
        self._sub.close()
        self._consumer.join(timeout=5.0)
        for worker in self._workers:
            worker.join(timeout=5.0)
