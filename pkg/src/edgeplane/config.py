"""Service configuration loading.

One YAML (or JSON) file configures the whole process: listen port, data
directory, the bootstrapped admin credential, cluster topology, registry
resolution mode, middleware routes, and pipeline knobs. Topology and routes
may be inlined or referenced as separate files relative to the config file.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .auth import DEFAULT_ITERATIONS, hash_api_key
from .bridge import RouteConfig
from .cluster import DEFAULT_NODE_PORT_RANGE, NodeSpec
from .errors import ValidationError

DEFAULT_LISTEN_PORT = 1123
DEFAULT_TICK_INTERVAL_MS = 500


@dataclass
class ServiceConfig:
    data_dir: Path
    admin_folder_id: str
    admin_api_key_hash: str
    listen_port: int = DEFAULT_LISTEN_PORT
    hash_iterations: int = DEFAULT_ITERATIONS
    nodes: list[NodeSpec] = field(default_factory=list)
    node_port_range: tuple[int, int] = DEFAULT_NODE_PORT_RANGE
    registry_mode: str = "fixture"
    registry_fixture: dict | None = None
    registry_base_url: str | None = None
    routes: list[RouteConfig] = field(default_factory=list)
    pipeline_window: int = 5000
    pipeline_max_concurrent: int = 1
    pipeline_k_sigma: float = 3.0
    tick_interval_ms: int = DEFAULT_TICK_INTERVAL_MS
    ui_dir: Path | None = None


def load_config(path: str | Path) -> ServiceConfig:
    path = Path(path)
    doc = _load_yaml(path)
    base = path.parent

    admin = doc.get("admin") or {}
    folder_id = admin.get("folder_id")
    if not folder_id:
        raise ValidationError("config: admin.folder_id is required")
    key_hash = admin.get("api_key_hash")
    if not key_hash:
        # Hashing at load keeps the store free of clear keys either way;
        # shipping a precomputed hash is still the recommended form.
        clear_key = admin.get("api_key")
        if not clear_key:
            raise ValidationError("config: admin.api_key_hash or admin.api_key is required")
        key_hash = hash_api_key(clear_key)

    cluster = doc.get("cluster") or {}
    if "topology_file" in cluster:
        cluster = _load_yaml(base / cluster["topology_file"])
    nodes = [_node_spec(entry) for entry in cluster.get("nodes", [])]
    port_range = tuple(cluster.get("node_port_range", DEFAULT_NODE_PORT_RANGE))
    if len(port_range) != 2:
        raise ValidationError("config: node_port_range must be [start, end]")

    registry = doc.get("registry") or {}
    mode = registry.get("mode", "fixture")
    if mode not in ("fixture", "live"):
        raise ValidationError(f"config: unknown registry mode {mode!r}")
    fixture = registry.get("entries")
    if "fixture_file" in registry:
        fixture = _load_yaml(base / registry["fixture_file"])
    base_url = registry.get("base_url")
    if mode == "live" and not base_url:
        raise ValidationError("config: registry.base_url is required in live mode")
    for broker_key in ("mqtt", "kafka"):
        if (doc.get("brokers") or {}).get(broker_key, {}).get("external"):
            raise ValidationError(
                "config: external broker adapters are not bundled; "
                "the in-process brokers are the supported mode"
            )

    middleware = doc.get("middleware") or {}
    route_entries = middleware.get("routes", [])
    if "routes_file" in middleware:
        route_entries = _load_yaml(base / middleware["routes_file"]).get("routes", [])
    routes = [_route_config(entry) for entry in route_entries]

    pipeline = doc.get("pipeline") or {}
    ui_dir = doc.get("ui_dir")

    return ServiceConfig(
        data_dir=Path(doc.get("data_dir", base / "data")),
        admin_folder_id=folder_id,
        admin_api_key_hash=key_hash,
        listen_port=int(doc.get("listen_port", DEFAULT_LISTEN_PORT)),
        hash_iterations=int(doc.get("hash_iterations", DEFAULT_ITERATIONS)),
        nodes=nodes,
        node_port_range=(int(port_range[0]), int(port_range[1])),
        registry_mode=mode,
        registry_fixture=fixture,
        registry_base_url=base_url if mode == "live" else None,
        routes=routes,
        pipeline_window=int(pipeline.get("window", 5000)),
        pipeline_max_concurrent=int(pipeline.get("max_concurrent", 1)),
        pipeline_k_sigma=float(pipeline.get("k_sigma", 3.0)),
        tick_interval_ms=int(doc.get("tick_interval_ms", DEFAULT_TICK_INTERVAL_MS)),
        ui_dir=Path(base / ui_dir) if ui_dir else None,
    )


def _load_yaml(path: Path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = yaml.safe_load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ValidationError(f"{path} is not valid YAML: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValidationError(f"{path} must hold a mapping")
    return doc


def _node_spec(entry: dict) -> NodeSpec:
    try:
        spec = NodeSpec(
            name=entry["name"],
            node_type=entry["node_type"],
            cpu_capacity_millicores=int(entry["cpu_millicores"]),
            memory_capacity_mi=int(entry["memory_mi"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"config: bad node entry {entry!r}: {exc}") from exc
    spec.validate()
    return spec


def _route_config(entry: dict) -> RouteConfig:
    try:
        config = RouteConfig(
            route_id=entry["id"],
            source=(entry["source"]["broker"], entry["source"]["topic"]),
            sinks=tuple((s["broker"], s["topic"]) for s in entry["sinks"]),
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"config: bad route entry {entry!r}: {exc}") from exc
    config.validate()
    return config
