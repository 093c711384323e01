"""Protocol-translation middleware.

A route subscribes on a source (broker, topic) and republishes every payload,
byte-identical, to one or more sinks. Each route runs on its own bridging
thread, which preserves per-source publish order at every sink. Routes may
not target their own source, and installing a route that would close a cycle
through previously installed routes is rejected, so a payload can never be
forwarded back onto the topic it came from.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

from .brokers import BROKER_KINDS, BrokerHub, Subscription
from .errors import DuplicateRoute, NotFound, ValidationError

_POLL_S = 0.02


@dataclass(frozen=True)
class RouteConfig:
    route_id: str
    source: tuple[str, str]
    sinks: tuple[tuple[str, str], ...]

    def validate(self) -> None:
        if not self.route_id:
            raise ValidationError("route_id must be non-empty")
        _check_endpoint(self.source)
        if not self.sinks:
            raise ValidationError(f"route {self.route_id!r}: sinks must be non-empty")
        for sink in self.sinks:
            _check_endpoint(sink)
            if sink == self.source:
                raise ValidationError(
                    f"route {self.route_id!r}: sink {sink} equals its source"
                )


def _check_endpoint(endpoint: tuple[str, str]) -> None:
    kind, topic = endpoint
    if kind not in BROKER_KINDS:
        raise ValidationError(f"unknown broker kind {kind!r}")
    if not topic:
        raise ValidationError("topic must be non-empty")


class _RouteWorker(threading.Thread):
    def __init__(self, hub: BrokerHub, config: RouteConfig, subscription: Subscription):
        super().__init__(name=f"bridge-{config.route_id}", daemon=True)
        self.config = config
        self._hub = hub
        self._sub = subscription
        self._stop_requested = threading.Event()

    def run(self) -> None:
        while True:
            message = self._sub.get(timeout=_POLL_S)
            if message is None:
                if self._stop_requested.is_set():
                    return
                continue
            try:
                for kind, topic in self.config.sinks:
                    self._hub.publish(kind, topic, message.payload)
            finally:
                self._sub.task_done()

    def pending(self) -> int:
        return self._sub.pending()

    def shutdown(self) -> None:
        self._stop_requested.set()
        self._sub.close()
        self.join(timeout=5.0)


class BridgeManager:
    """Owns the installed routes and their bridging threads."""

    def __init__(self, hub: BrokerHub):
        self._hub = hub
        self._routes: dict[str, _RouteWorker] = {}
        self._lock = threading.Lock()

    def install_route(self, config: RouteConfig) -> str:
        config.validate()
        with self._lock:
            if config.route_id in self._routes:
                raise DuplicateRoute(f"route {config.route_id!r} already installed")
            self._check_acyclic(config)
            subscription = self._hub.subscribe(*config.source)
            worker = _RouteWorker(self._hub, config, subscription)
            self._routes[config.route_id] = worker
        worker.start()
        return config.route_id

    def _check_acyclic(self, candidate: RouteConfig) -> None:
        # The installed graph is acyclic by induction, so any cycle would run
        # through the candidate's edges: reject if its source is reachable
        # from any of its sinks.
        edges: dict[tuple[str, str], set[tuple[str, str]]] = {}
        for worker in self._routes.values():
            edges.setdefault(worker.config.source, set()).update(worker.config.sinks)
        for sink in candidate.sinks:
            stack, seen = [sink], set()
            while stack:
                node = stack.pop()
                if node == candidate.source:
                    raise ValidationError(
                        f"route {candidate.route_id!r} would create a forwarding cycle "
                        f"through {node}"
                    )
                if node in seen:
                    continue
                seen.add(node)
                stack.extend(edges.get(node, ()))

    def remove_route(self, route_id: str) -> None:
        with self._lock:
            worker = self._routes.pop(route_id, None)
        if worker is None:
            raise NotFound(f"route {route_id!r} not installed")
        worker.shutdown()

    def replace_routes(self, configs: list[RouteConfig],
                       keep: set[str] | frozenset[str] = frozenset()) -> list[str]:
        """Reload: tear down every installed route except the ones named in
        ``keep``, then install the new set."""
        for route_id in self.route_ids():
            if route_id not in keep:
                self.remove_route(route_id)
        return [self.install_route(config) for config in configs]

    def route_ids(self) -> list[str]:
        with self._lock:
            return sorted(self._routes)

    def has_route(self, source: tuple[str, str], sink: tuple[str, str]) -> bool:
        with self._lock:
            return any(
                worker.config.source == source and sink in worker.config.sinks
                for worker in self._routes.values()
            )

    def wait_quiescent(self, timeout: float = 5.0) -> bool:
        """Block until no route holds undelivered messages (or timeout)."""
        deadline = threading.Event()
        timer = threading.Timer(timeout, deadline.set)
        timer.start()
        try:
            while not deadline.is_set():
                with self._lock:
                    workers = list(self._routes.values())
                if all(worker.pending() == 0 for worker in workers):
                    return True
                deadline.wait(_POLL_S)
            return False
        finally:
            timer.cancel()

    def shutdown(self) -> None:
        for route_id in self.route_ids():
            try:
                self.remove_route(route_id)
            except NotFound:
                pass
