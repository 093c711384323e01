"""Process composition: builds every component from one ServiceConfig and
owns the background reconcile loop."""

from __future__ import annotations

import threading

from .bridge import BridgeManager
from .brokers import BrokerHub
from .cluster import ClusterSim
from .config import ServiceConfig
from .pipeline import PipelineRuntime
from .registry import ArchitectureResolver
from .service import ControlPlaneService
from .store import StateStore


class AppRuntime:
    def __init__(self, config: ServiceConfig):
        self.config = config
        self.store = StateStore(config.data_dir)
        self.cluster = ClusterSim(config.nodes, node_port_range=config.node_port_range)
        self.resolver = ArchitectureResolver(
            fixture=config.registry_fixture,
            live_base_url=config.registry_base_url if config.registry_mode == "live" else None,
        )
        self.service = ControlPlaneService(
            store=self.store,
            cluster=self.cluster,
            resolver=self.resolver,
            admin_folder_id=config.admin_folder_id,
            admin_api_key_hash=config.admin_api_key_hash,
            hash_iterations=config.hash_iterations,
        )
        self.hub = BrokerHub()
        self.bridge = BridgeManager(self.hub)
        for route in config.routes:
            self.bridge.install_route(route)
        self.pipeline = PipelineRuntime(
            self.hub,
            self.bridge,
            window_size=config.pipeline_window,
            max_concurrent=config.pipeline_max_concurrent,
            k_sigma=config.pipeline_k_sigma,
        )
        self._stop = threading.Event()
        self._reconciler: threading.Thread | None = None
        if config.tick_interval_ms > 0:
            self._reconciler = threading.Thread(
                target=self._reconcile_loop, name="reconcile", daemon=True
            )
            self._reconciler.start()

    def _reconcile_loop(self) -> None:
        interval = self.config.tick_interval_ms / 1000.0
        while not self._stop.wait(interval):
            self.service.reconcile_once()

    def shutdown(self) -> None:
        self._stop.set()
        if self._reconciler is not None:
            self._reconciler.join(timeout=5.0)
        self.pipeline.shutdown()
        self.bridge.shutdown()
        self.hub.stop()
