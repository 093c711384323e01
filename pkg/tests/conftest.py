from __future__ import annotations

import pytest

from edgeplane.auth import Credential, hash_api_key
from edgeplane.cluster import ClusterSim, NodeSpec
from edgeplane.registry import ArchitectureResolver
from edgeplane.service import ControlPlaneService
from edgeplane.store import StateStore

# Keep key stretching cheap in tests; production default stays high.
TEST_ITERATIONS = 1200

ADMIN_CRED = Credential(folder_id="admin", api_key="admin-key")


def two_node_specs() -> list[NodeSpec]:
    return [
        NodeSpec("amd-a", "amd", 2000, 2048),
        NodeSpec("arm-a", "arm", 1000, 1024),
    ]


def make_service(tmp_path, nodes=None, fixture=None, port_range=(30000, 32767)):
    store = StateStore(tmp_path / "data")
    cluster = ClusterSim(nodes if nodes is not None else two_node_specs(),
                         node_port_range=port_range)
    resolver = ArchitectureResolver(fixture=fixture)
    return ControlPlaneService(
        store=store,
        cluster=cluster,
        resolver=resolver,
        admin_folder_id=ADMIN_CRED.folder_id,
        admin_api_key_hash=hash_api_key(ADMIN_CRED.api_key, iterations=TEST_ITERATIONS),
        hash_iterations=TEST_ITERATIONS,
    )


@pytest.fixture
def service(tmp_path):
    return make_service(tmp_path)
