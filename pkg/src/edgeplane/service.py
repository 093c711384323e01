"""Control-plane operations: tenants, deployments, ports, cluster status.

Credentials ride on every call (two headers at the HTTP layer); there is no
session state. The admin principal is bootstrapped from configuration, all
other tenants live in the persistent store. Deployment creation strings the
pieces together: architecture resolution, node-type selection, NodePort
allocation, manifest rendering, and handing the manifest to the cluster
backend.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from datetime import datetime, timezone

from .auth import (
    DUMMY_HASH,
    ROLE_ADMIN,
    ROLE_USER,
    Credential,
    Principal,
    hash_api_key,
    verify_api_key,
)
from .cluster import ClusterSim
from .errors import (
    AuthFailed,
    DuplicateName,
    Forbidden,
    NotFound,
    UnsupportedImage,
    ValidationError,
)
from .manifest import ManifestInput, render_deployment_manifest, validate_name, validate_ports
from .registry import ArchitectureResolver, select_node_type
from .store import StateStore


@dataclass(frozen=True)
class DeployRequest:
    container_name: str
    image: str
    ports: tuple[int, ...]
    cpu_millicores: int
    memory_mi: int
    # Accepted and persisted, but not applied to placement or manifests.
    gpu_cores: int | None = None

    def validate(self) -> None:
        validate_name(self.container_name)
        if not self.image or not isinstance(self.image, str):
            raise ValidationError("image must be a non-empty string")
        validate_ports(self.ports)
        if not isinstance(self.cpu_millicores, int) or self.cpu_millicores < 1:
            raise ValidationError("cpu_millicores must be a positive integer")
        if not isinstance(self.memory_mi, int) or self.memory_mi < 1:
            raise ValidationError("memory_mi must be a positive integer")
        if self.gpu_cores is not None and (
            not isinstance(self.gpu_cores, int) or self.gpu_cores < 0
        ):
            raise ValidationError("gpu_cores must be a non-negative integer when given")


@dataclass(frozen=True)
class DeploymentReceipt:
    deployment_id: str
    folder_id: str
    selected_node_type: str
    port_bindings: tuple[tuple[int, int], ...]
    status: str

    def as_dict(self) -> dict:
        return {
            "deployment_id": self.deployment_id,
            "folder_id": self.folder_id,
            "selected_node_type": self.selected_node_type,
            "port_bindings": [
                {"container_port": c, "node_port": n} for c, n in self.port_bindings
            ],
            "status": self.status,
        }


class ControlPlaneService:
    def __init__(
        self,
        store: StateStore,
        cluster: ClusterSim,
        resolver: ArchitectureResolver,
        admin_folder_id: str,
        admin_api_key_hash: str,
        hash_iterations: int | None = None,
    ):
        self.store = store
        self.cluster = cluster
        self.resolver = resolver
        self._admin_folder_id = admin_folder_id
        self._admin_api_key_hash = admin_api_key_hash
        self._hash_iterations = hash_iterations
        self._deploy_lock = threading.Lock()
        self._rehydrate()

    def _rehydrate(self) -> None:
        """Rebuild simulator state from the persisted deployments: bindings go
        back into the port ledger, manifests are re-applied as Pending pods."""
        self.cluster.ports.restore(self.store.port_assignments())
        for record in self.store.deployments():
            self.cluster.apply_manifest(
                _manifest_input(record), deployment_id=record["deployment_id"]
            )

    # -- authentication --------------------------------------------------------

    def authenticate(self, cred: Credential) -> Principal:
        """Match the credential against the admin bootstrap or a stored user.

        Unknown folder ids verify against a throwaway hash so the failure is
        indistinguishable from a wrong key.
        """
        if not cred.folder_id or not cred.api_key:
            raise AuthFailed("missing credentials")
        if cred.folder_id == self._admin_folder_id:
            if verify_api_key(cred.api_key, self._admin_api_key_hash):
                return Principal(cred.folder_id, ROLE_ADMIN)
            raise AuthFailed("invalid credentials")
        record = self.store.get_user(cred.folder_id)
        if record is None:
            verify_api_key(cred.api_key, DUMMY_HASH)
            raise AuthFailed("invalid credentials")
        if not verify_api_key(cred.api_key, record["api_key_hash"]):
            raise AuthFailed("invalid credentials")
        return Principal(cred.folder_id, record["role"])

    def register_user(self, admin: Credential, new_folder_id: str, new_api_key: str) -> dict:
        principal = self.authenticate(admin)
        if not principal.is_admin:
            raise Forbidden("only the administrator may register users")
        if not new_folder_id or not new_api_key:
            raise ValidationError("folder id and api key must be non-empty")
        if new_folder_id == self._admin_folder_id:
            raise ValidationError("folder id is reserved for the administrator")
        kwargs = {} if self._hash_iterations is None else {"iterations": self._hash_iterations}
        record = self.store.add_user(
            folder_id=new_folder_id,
            api_key_hash=hash_api_key(new_api_key, **kwargs),
            role=ROLE_USER,
            created_at=_utcnow(),
        )
        return {
            "folder_id": record["folder_id"],
            "role": record["role"],
            "created_at": record["created_at"],
        }

    # -- deployments -------------------------------------------------------------

    def create_deployment(self, cred: Credential, request: DeployRequest) -> DeploymentReceipt:
        principal = self.authenticate(cred)
        request.validate()
        archs = self.resolver.resolve(request.image)
        if not archs:
            raise UnsupportedImage(
                f"image {request.image!r} supports no known architecture"
            )
        with self._deploy_lock:
            for record in self.store.deployments(principal.folder_id):
                if record["container_name"] == request.container_name:
                    raise DuplicateName(
                        f"container name {request.container_name!r} is already deployed"
                    )
            node_type = select_node_type(archs, self.cluster.inventory())
            manifest_input = ManifestInput(
                name=request.container_name,
                compatible=node_type,
                image=request.image,
                all_ports=tuple(request.ports),
                memory=request.memory_mi,
                cpu=request.cpu_millicores,
            )
            deployment_id = self.cluster.apply_manifest(manifest_input)
            try:
                bindings = tuple(
                    (port, self.cluster.allocate_node_port(deployment_id, port))
                    for port in request.ports
                )
            except Exception:
                self.cluster.remove_deployment(deployment_id)
                raise
            self.store.add_deployment({
                "deployment_id": deployment_id,
                "folder_id": principal.folder_id,
                "container_name": request.container_name,
                "image": request.image,
                "ports": list(request.ports),
                "cpu_millicores": request.cpu_millicores,
                "memory_mi": request.memory_mi,
                "gpu_cores": request.gpu_cores,
                "selected_node_type": node_type,
                "port_bindings": [[c, n] for c, n in bindings],
                "status": "Pending",
                "created_at": _utcnow(),
            })
            self.store.set_port_assignments(self.cluster.ports.assignments())
        return DeploymentReceipt(
            deployment_id=deployment_id,
            folder_id=principal.folder_id,
            selected_node_type=node_type,
            port_bindings=bindings,
            status="Pending",
        )

    def list_exposed_ports(self, cred: Credential) -> list[tuple[str, int, int]]:
        principal = self.authenticate(cred)
        rows = [
            (record["container_name"], container_port, node_port)
            for record in self.store.deployments(principal.folder_id)
            for container_port, node_port in record["port_bindings"]
        ]
        return sorted(rows, key=lambda row: (row[0], row[1]))

    def deployment_manifest(self, cred: Credential, deployment_id: str) -> str:
        principal = self.authenticate(cred)
        record = self.store.get_deployment(deployment_id)
        if record is None or (
            record["folder_id"] != principal.folder_id and not principal.is_admin
        ):
            raise NotFound(f"deployment {deployment_id!r} not found")
        return render_deployment_manifest(_manifest_input(record))

    # -- cluster ----------------------------------------------------------------

    def cluster_status(self, cred: Credential) -> dict:
        principal = self.authenticate(cred)
        if not principal.is_admin:
            raise Forbidden("cluster status is restricted to the administrator")
        return self.cluster.status()

    def reconcile_once(self) -> list:
        """Drive one simulator tick and mirror pod phases into receipts."""
        events = self.cluster.tick()
        for record in self.store.deployments():
            pod = self.cluster.pod_for_deployment(record["deployment_id"])
            if pod is not None and pod.phase != record["status"]:
                self.store.update_deployment_status(record["deployment_id"], pod.phase)
        return events


def _manifest_input(record: dict) -> ManifestInput:
    return ManifestInput(
        name=record["container_name"],
        compatible=record["selected_node_type"],
        image=record["image"],
        all_ports=tuple(record["ports"]),
        memory=record["memory_mi"],
        cpu=record["cpu_millicores"],
    )


def _utcnow() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")
