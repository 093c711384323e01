from __future__ import annotations

import random

import pytest

from edgeplane.auth import Credential, hash_api_key, verify_api_key
from edgeplane.errors import AuthFailed, DuplicateUser, ValidationError
from edgeplane.store import SCHEMA_VERSION, STATE_FILENAME, StateStore

from conftest import ADMIN_CRED, TEST_ITERATIONS, make_service


def test_hash_round_trip():
    stored = hash_api_key("s3cret", iterations=TEST_ITERATIONS)
    assert verify_api_key("s3cret", stored)
    assert not verify_api_key("other", stored)
    assert "s3cret" not in stored


def test_hashes_salted():
    a = hash_api_key("same", iterations=TEST_ITERATIONS)
    b = hash_api_key("same", iterations=TEST_ITERATIONS)
    assert a != b
    assert verify_api_key("same", a) and verify_api_key("same", b)


def test_verify_garbage_stored_value():
    assert not verify_api_key("k", "not-a-hash")
    assert not verify_api_key("k", "")


def test_register_then_authenticate(service):
    record = service.register_user(ADMIN_CRED, "wp4-team", "k3y")
    assert record["folder_id"] == "wp4-team"
    assert record["role"] == "user"
    principal = service.authenticate(Credential("wp4-team", "k3y"))
    assert principal.folder_id == "wp4-team" and principal.role == "user"


def test_register_duplicate_folder_rejected(service):
    service.register_user(ADMIN_CRED, "wp4-team", "k3y")
    with pytest.raises(DuplicateUser):
        service.register_user(ADMIN_CRED, "wp4-team", "other")


def test_register_requires_valid_admin(service):
    with pytest.raises(AuthFailed):
        service.register_user(Credential("admin", "bad-key"), "x", "y")


def test_register_rejects_empty_fields(service):
    with pytest.raises(ValidationError):
        service.register_user(ADMIN_CRED, "", "key")
    with pytest.raises(ValidationError):
        service.register_user(ADMIN_CRED, "folder", "")


def test_registered_user_cannot_register_others(service):
    from edgeplane.errors import Forbidden

    service.register_user(ADMIN_CRED, "tenant", "key")
    with pytest.raises(Forbidden):
        service.register_user(Credential("tenant", "key"), "other", "key2")


def test_wrong_key_and_unknown_folder_fail_alike(service):
    service.register_user(ADMIN_CRED, "wp4-team", "k3y")
    with pytest.raises(AuthFailed) as wrong_key:
        service.authenticate(Credential("wp4-team", "wrong"))
    with pytest.raises(AuthFailed) as unknown:
        service.authenticate(Credential("ghost", "k3y"))
    assert str(wrong_key.value) == str(unknown.value)


def test_auth_round_trip_property(service):
    rng = random.Random(1)
    creds = [
        (f"tenant-{i}", "".join(rng.choices("abcdef0123456789", k=12)))
        for i in range(8)
    ]
    for folder_id, key in creds:
        service.register_user(ADMIN_CRED, folder_id, key)
    for folder_id, key in creds:
        assert service.authenticate(Credential(folder_id, key)).folder_id == folder_id
        with pytest.raises(AuthFailed):
            service.authenticate(Credential(folder_id, key + "x"))


# -- persistence durability -----------------------------------------------------


def test_store_survives_restart_byte_compatibly(tmp_path):
    store = StateStore(tmp_path)
    store.add_user("t1", "hash1", "user", "2023-06-01T00:00:00+00:00")
    store.add_deployment({
        "deployment_id": "dep-00001",
        "folder_id": "t1",
        "container_name": "nginx",
        "image": "nginx",
        "ports": [80],
        "cpu_millicores": 500,
        "memory_mi": 256,
        "gpu_cores": None,
        "selected_node_type": "amd",
        "port_bindings": [[80, 30000]],
        "status": "Pending",
        "created_at": "2023-06-01T00:00:00+00:00",
    })
    store.set_port_assignments({30000: ("dep-00001", 80)})
    before = (tmp_path / STATE_FILENAME).read_bytes()

    reopened = StateStore(tmp_path)
    assert (tmp_path / STATE_FILENAME).read_bytes() == before
    assert reopened.users() == store.users()
    assert reopened.deployments() == store.deployments()
    assert reopened.port_assignments() == {30000: ("dep-00001", 80)}


def test_store_restart_random_state_property(tmp_path):
    rng = random.Random(5)
    store = StateStore(tmp_path)
    for i in range(rng.randrange(2, 8)):
        store.add_user(f"tenant-{i}", f"hash-{rng.random()}", "user", "2023-01-01T00:00:00+00:00")
    assignments = {}
    for i in range(rng.randrange(1, 6)):
        dep_id = f"dep-{i:05d}"
        port = 30000 + i
        assignments[port] = (dep_id, 80)
        store.add_deployment({
            "deployment_id": dep_id,
            "folder_id": f"tenant-{i % 2}",
            "container_name": f"app-{i}",
            "image": "nginx",
            "ports": [80],
            "cpu_millicores": 100 + i,
            "memory_mi": 64,
            "gpu_cores": None,
            "selected_node_type": "amd",
            "port_bindings": [[80, port]],
            "status": "Pending",
            "created_at": "2023-01-01T00:00:00+00:00",
        })
    store.set_port_assignments(assignments)

    reopened = StateStore(tmp_path)
    assert reopened.users() == store.users()
    assert reopened.deployments() == store.deployments()
    assert reopened.port_assignments() == store.port_assignments()


def test_store_rejects_unknown_schema_version(tmp_path):
    store = StateStore(tmp_path)
    path = tmp_path / STATE_FILENAME
    path.write_text(path.read_text().replace(
        f'"schema_version": {SCHEMA_VERSION}', '"schema_version": 999'
    ))
    with pytest.raises(ValidationError):
        StateStore(tmp_path)


def test_service_restart_preserves_state(tmp_path):
    service = make_service(tmp_path)
    service.register_user(ADMIN_CRED, "wp4-team", "k3y")
    from edgeplane.service import DeployRequest

    receipt = service.create_deployment(
        Credential("wp4-team", "k3y"),
        DeployRequest("nginx", "nginx", (80,), 500, 256),
    )
    before_users = service.store.users()
    before_deployments = service.store.deployments()
    before_ports = service.store.port_assignments()

    # Same data directory, fresh process composition.
    reborn = make_service(tmp_path)
    assert reborn.store.users() == before_users
    assert reborn.store.deployments() == before_deployments
    assert reborn.store.port_assignments() == before_ports
    # The rehydrated simulator owns the same bindings and replays placement.
    assert reborn.cluster.ports.assignments() == {30000: (receipt.deployment_id, 80)}
    reborn.reconcile_once()
    pod = reborn.cluster.pod_for_deployment(receipt.deployment_id)
    assert pod.phase == "Running"
