"""Simulated multi-architecture cluster backend.

Models just enough of a container cluster to honor the manifest contract:
nodes with cpu/memory accounting, single-replica deployments whose pods are
placed by a deterministic reconcile pass, NodePort allocation from a
configurable range, and restartPolicy Always (a Failed pod is replaced by a
fresh Pending pod on the next pass, then placed on the pass after that).

Placement policy: among nodes whose ``node_type`` matches the manifest's
nodeSelector and whose free cpu and memory cover the pod's requests, pick the
one with the most free cpu millicores, breaking ties by lexicographically
smallest node name. Identical state always yields identical placements.

All mutations are serialized on one internal lock, so each reconcile pass is
the only writer while it runs; reads take consistent snapshots.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import yaml

from .errors import (
    DuplicateBinding,
    InvalidPhase,
    NotFound,
    PortExhausted,
    ValidationError,
)
from .manifest import ManifestInput
from .registry import ARCH_LABELS

PHASE_PENDING = "Pending"
PHASE_RUNNING = "Running"
PHASE_FAILED = "Failed"

DEFAULT_NODE_PORT_RANGE = (30000, 32767)


@dataclass(frozen=True)
class NodeSpec:
    name: str
    node_type: str
    cpu_capacity_millicores: int
    memory_capacity_mi: int

    def validate(self) -> None:
        if not self.name:
            raise ValidationError("node name must be non-empty")
        if self.node_type not in ARCH_LABELS:
            raise ValidationError(f"node {self.name!r}: unknown node_type {self.node_type!r}")
        if self.cpu_capacity_millicores < 1 or self.memory_capacity_mi < 1:
            raise ValidationError(f"node {self.name!r}: capacities must be positive")


@dataclass
class PodState:
    pod_id: str
    deployment_id: str
    node: str | None
    phase: str
    restart_count: int


@dataclass(frozen=True)
class SchedulingEvent:
    kind: str  # "placed" | "replaced"
    pod_id: str
    deployment_id: str
    node: str | None = None
    restart_count: int = 0


@dataclass
class _Node:
    spec: NodeSpec
    cpu_used: int = 0
    memory_used: int = 0

    @property
    def cpu_free(self) -> int:
        return self.spec.cpu_capacity_millicores - self.cpu_used

    @property
    def memory_free(self) -> int:
        return self.spec.memory_capacity_mi - self.memory_used


@dataclass
class _Deployment:
    deployment_id: str
    name: str
    node_type: str
    image: str
    ports: tuple[int, ...]
    cpu_millicores: int
    memory_mi: int
    pod_id: str = ""


class PortLedger:
    """Injective map node_port -> (deployment_id, container_port)."""

    def __init__(self, range_start: int = DEFAULT_NODE_PORT_RANGE[0],
                 range_end: int = DEFAULT_NODE_PORT_RANGE[1]):
        if range_start > range_end or range_start < 1 or range_end > 65535:
            raise ValidationError(f"invalid node port range [{range_start}, {range_end}]")
        self.range_start = range_start
        self.range_end = range_end
        self._assignments: dict[int, tuple[str, int]] = {}

    def allocate(self, deployment_id: str, container_port: int) -> int:
        binding = (deployment_id, container_port)
        if binding in self._assignments.values():
            raise DuplicateBinding(
                f"container port {container_port} of {deployment_id} already bound"
            )
        for node_port in range(self.range_start, self.range_end + 1):
            if node_port not in self._assignments:
                self._assignments[node_port] = binding
                return node_port
        raise PortExhausted(
            f"no free node port in [{self.range_start}, {self.range_end}]"
        )

    def release(self, node_port: int) -> None:
        if node_port not in self._assignments:
            raise NotFound(f"node port {node_port} is not assigned")
        del self._assignments[node_port]

    def bindings_for(self, deployment_id: str) -> list[tuple[int, int]]:
        """(container_port, node_port) pairs, in allocation order."""
        return [
            (container_port, node_port)
            for node_port, (dep, container_port) in self._assignments.items()
            if dep == deployment_id
        ]

    def assignments(self) -> dict[int, tuple[str, int]]:
        return dict(self._assignments)

    def restore(self, assignments: Mapping[int, tuple[str, int]]) -> None:
        for node_port, (deployment_id, container_port) in assignments.items():
            node_port = int(node_port)
            if not self.range_start <= node_port <= self.range_end:
                raise ValidationError(f"node port {node_port} outside the configured range")
            if node_port in self._assignments:
                raise DuplicateBinding(f"node port {node_port} restored twice")
            self._assignments[node_port] = (deployment_id, int(container_port))


class ClusterSim:
    def __init__(self, nodes: Iterable[NodeSpec],
                 node_port_range: tuple[int, int] = DEFAULT_NODE_PORT_RANGE):
        self._lock = threading.RLock()
        self._nodes: dict[str, _Node] = {}
        for spec in nodes:
            spec.validate()
            if spec.name in self._nodes:
                raise ValidationError(f"duplicate node name {spec.name!r}")
            self._nodes[spec.name] = _Node(spec)
        self.ports = PortLedger(*node_port_range)
        self._deployments: dict[str, _Deployment] = {}
        self._pods: dict[str, PodState] = {}
        self._dep_seq = 0
        self._pod_seq = 0

    # -- deployment intake ---------------------------------------------------

    def apply_manifest(self, manifest: str | ManifestInput,
                       deployment_id: str | None = None) -> str:
        """Register a single-replica deployment; its pod starts Pending and
        is placed by the next tick."""
        spec = manifest if isinstance(manifest, ManifestInput) else _parse_manifest(manifest)
        spec.validate()
        if spec.compatible not in ARCH_LABELS:
            raise ValidationError(f"unknown node_type {spec.compatible!r} in nodeSelector")
        with self._lock:
            dep_id = deployment_id or self._next_dep_id()
            if dep_id in self._deployments:
                raise ValidationError(f"deployment id {dep_id!r} already exists")
            self._bump_dep_seq(dep_id)
            deployment = _Deployment(
                deployment_id=dep_id,
                name=spec.name,
                node_type=spec.compatible,
                image=spec.image,
                ports=tuple(spec.all_ports),
                cpu_millicores=spec.cpu,
                memory_mi=spec.memory,
            )
            self._deployments[dep_id] = deployment
            self._create_pod(deployment, restart_count=0)
            return dep_id

    def remove_deployment(self, deployment_id: str) -> None:
        with self._lock:
            deployment = self._deployments.pop(deployment_id, None)
            if deployment is None:
                raise NotFound(f"deployment {deployment_id!r} not found")
            pod = self._pods.pop(deployment.pod_id, None)
            if pod is not None and pod.phase == PHASE_RUNNING:
                self._release_node(pod.node, deployment)
            for container_port, node_port in self.ports.bindings_for(deployment_id):
                self.ports.release(node_port)

    def allocate_node_port(self, deployment_id: str, container_port: int) -> int:
        with self._lock:
            if deployment_id not in self._deployments:
                raise NotFound(f"deployment {deployment_id!r} not found")
            return self.ports.allocate(deployment_id, container_port)

    # -- reconcile -----------------------------------------------------------

    def tick(self) -> list[SchedulingEvent]:
        """One reconcile pass: place Pending pods, then replace Failed ones.

        Replacements created here stay Pending until the following pass,
        which keeps the self-healing cadence observable one step at a time.
        """
        events: list[SchedulingEvent] = []
        with self._lock:
            for pod in sorted(self._pods.values(), key=lambda p: p.pod_id):
                if pod.phase != PHASE_PENDING:
                    continue
                deployment = self._deployments[pod.deployment_id]
                node = self._select_node(deployment)
                if node is None:
                    continue  # infeasible: stays Pending
                node.cpu_used += deployment.cpu_millicores
                node.memory_used += deployment.memory_mi
                pod.node = node.spec.name
                pod.phase = PHASE_RUNNING
                events.append(SchedulingEvent(
                    kind="placed", pod_id=pod.pod_id,
                    deployment_id=pod.deployment_id, node=pod.node,
                    restart_count=pod.restart_count,
                ))
            for pod in sorted(self._pods.values(), key=lambda p: p.pod_id):
                if pod.phase != PHASE_FAILED:
                    continue
                deployment = self._deployments[pod.deployment_id]
                del self._pods[pod.pod_id]
                replacement = self._create_pod(deployment, pod.restart_count + 1)
                events.append(SchedulingEvent(
                    kind="replaced", pod_id=replacement.pod_id,
                    deployment_id=deployment.deployment_id,
                    restart_count=replacement.restart_count,
                ))
        return events

    def _select_node(self, deployment: _Deployment) -> _Node | None:
        feasible = [
            node for node in self._nodes.values()
            if node.spec.node_type == deployment.node_type
            and node.cpu_free >= deployment.cpu_millicores
            and node.memory_free >= deployment.memory_mi
        ]
        if not feasible:
            return None
        return min(feasible, key=lambda n: (-n.cpu_free, n.spec.name))

    def kill_pod(self, pod_id: str) -> PodState:
        with self._lock:
            pod = self._pods.get(pod_id)
            if pod is None:
                raise NotFound(f"pod {pod_id!r} not found")
            if pod.phase != PHASE_RUNNING:
                raise InvalidPhase(f"pod {pod_id!r} is {pod.phase}, not Running")
            self._release_node(pod.node, self._deployments[pod.deployment_id])
            pod.phase = PHASE_FAILED
            pod.node = None
            return PodState(**pod.__dict__)

    # -- views ---------------------------------------------------------------

    def inventory(self) -> set[str]:
        """Node types that still offer any schedulable capacity."""
        with self._lock:
            return {
                node.spec.node_type
                for node in self._nodes.values()
                if node.cpu_free >= 1 and node.memory_free >= 1
            }

    def pod_for_deployment(self, deployment_id: str) -> PodState | None:
        with self._lock:
            deployment = self._deployments.get(deployment_id)
            if deployment is None:
                return None
            pod = self._pods.get(deployment.pod_id)
            return PodState(**pod.__dict__) if pod else None

    def status(self) -> dict:
        """Consistent snapshot of nodes, pods and services."""
        with self._lock:
            nodes = [
                {
                    "name": node.spec.name,
                    "node_type": node.spec.node_type,
                    "cpu_capacity_millicores": node.spec.cpu_capacity_millicores,
                    "cpu_used_millicores": node.cpu_used,
                    "memory_capacity_mi": node.spec.memory_capacity_mi,
                    "memory_used_mi": node.memory_used,
                }
                for node in sorted(self._nodes.values(), key=lambda n: n.spec.name)
            ]
            pods = [
                {
                    "pod_id": pod.pod_id,
                    "deployment_id": pod.deployment_id,
                    "node": pod.node,
                    "phase": pod.phase,
                    "restart_count": pod.restart_count,
                }
                for pod in sorted(self._pods.values(), key=lambda p: p.pod_id)
            ]
            services = [
                {
                    "deployment_id": dep_id,
                    "port_bindings": [
                        {"container_port": c, "node_port": n}
                        for c, n in sorted(self.ports.bindings_for(dep_id))
                    ],
                }
                for dep_id in sorted(self._deployments)
            ]
        return {"nodes": nodes, "pods": pods, "services": services}

    # -- internals -----------------------------------------------------------

    def _create_pod(self, deployment: _Deployment, restart_count: int) -> PodState:
        self._pod_seq += 1
        pod = PodState(
            pod_id=f"pod-{self._pod_seq:05d}",
            deployment_id=deployment.deployment_id,
            node=None,
            phase=PHASE_PENDING,
            restart_count=restart_count,
        )
        self._pods[pod.pod_id] = pod
        deployment.pod_id = pod.pod_id
        return pod

    def _release_node(self, node_name: str | None, deployment: _Deployment) -> None:
        if node_name is None:
            return
        node = self._nodes[node_name]
        node.cpu_used -= deployment.cpu_millicores
        node.memory_used -= deployment.memory_mi

    def _next_dep_id(self) -> str:
        self._dep_seq += 1
        return f"dep-{self._dep_seq:05d}"

    def _bump_dep_seq(self, dep_id: str) -> None:
        # Keeps generated ids unique after deployments are rehydrated with
        # their persisted ids.
        prefix, _, suffix = dep_id.rpartition("-")
        if prefix == "dep" and suffix.isdigit():
            self._dep_seq = max(self._dep_seq, int(suffix))


def _parse_manifest(text: str) -> ManifestInput:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ValidationError(f"manifest is not valid YAML: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("kind") != "Deployment":
        raise ValidationError("manifest must be a Deployment document")
    try:
        pod_spec = doc["spec"]["template"]["spec"]
        container = pod_spec["containers"][0]
        requests = container["resources"]["requests"]
        return ManifestInput(
            name=container["name"],
            compatible=pod_spec["nodeSelector"]["node_type"],
            image=container["image"],
            all_ports=tuple(int(p["containerPort"]) for p in container["ports"]),
            memory=_strip_unit(requests["memory"], "Mi"),
            cpu=_strip_unit(requests["cpu"], "m"),
        )
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        raise ValidationError(f"manifest is missing required fields: {exc}") from exc


def _strip_unit(value, unit: str) -> int:
    text = str(value)
    if not text.endswith(unit):
        raise ValidationError(f"expected a quantity ending in {unit!r}, got {value!r}")
    return int(text[: -len(unit)])
