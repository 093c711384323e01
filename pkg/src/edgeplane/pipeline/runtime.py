"""Wires the pipeline stages together over the broker hub.

Stages communicate only through topics: replay publishes raw rows on the
mqtt-style broker, the cleaning worker turns them into processed samples, a
middleware route carries processed samples onto the kafka-style classify
topic, and the classifier pool batches and classifies from there. Results
land in the event store that the visualization endpoint snapshots.
"""

from __future__ import annotations

import time
from pathlib import Path

from ..bridge import BridgeManager, RouteConfig
from ..brokers import BrokerHub
from .cleaning import CleaningWorker
from .events import DEFAULT_WINDOW, EventStore
from .messages import TOPIC_CLASSIFY, TOPIC_PROCESSED
from .pool import ClassifierPool
from .replay import ReplaySummary, replay_fixture

PIPELINE_ROUTE_ID = "pipeline-processed-to-classify"


class PipelineRuntime:
    def __init__(
        self,
        hub: BrokerHub,
        bridge: BridgeManager,
        window_size: int = DEFAULT_WINDOW,
        max_concurrent: int = 1,
        k_sigma: float = 3.0,
    ):
        self.hub = hub
        self.bridge = bridge
        self.event_store = EventStore(window_size=window_size)
        source = ("mqtt", TOPIC_PROCESSED)
        sink = ("kafka", TOPIC_CLASSIFY)
        if not bridge.has_route(source, sink):
            bridge.install_route(
                RouteConfig(route_id=PIPELINE_ROUTE_ID, source=source, sinks=(sink,))
            )
        self.cleaning = CleaningWorker(hub, self.event_store)
        self.cleaning.start()
        self.pool = ClassifierPool(
            hub, self.event_store, max_concurrent=max_concurrent, k_sigma=k_sigma
        )

    def replay(self, path: str | Path, interval_ms: float = 1.0,
               mode: str = "virtual") -> ReplaySummary:
        return replay_fixture(self.hub, path, interval_ms=interval_ms, mode=mode)

    def drain(self, timeout: float = 30.0) -> bool:
        """Wait until every published row has flowed through to the store."""
        deadline = time.monotonic() + timeout
        while self.cleaning.pending() > 0:
            if time.monotonic() >= deadline:
                return False
            time.sleep(0.02)
        if not self.bridge.wait_quiescent(max(0.0, deadline - time.monotonic())):
            return False
        return self.pool.wait_idle(max(0.01, deadline - time.monotonic()))

    def snapshot(self) -> dict:
        return self.event_store.snapshot()

    def shutdown(self) -> None:
        self.cleaning.shutdown()
        self.pool.shutdown()
