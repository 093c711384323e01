"""Embedded persistence: one schema-versioned JSON file per data directory.

Every mutation rewrites the file atomically (temp file + fsync + rename), so
a restart over the same directory always loads the last committed state.
Writers are serialized on an internal lock; readers get plain copies of
committed state.
"""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path

from .errors import DuplicateUser, NotFound, ValidationError

SCHEMA_VERSION = 1
STATE_FILENAME = "state.json"


def _empty_state() -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "users": {},
        "deployments": {},
        "port_assignments": {},
    }


class StateStore:
    def __init__(self, data_dir: str | Path):
        self._path = Path(data_dir) / STATE_FILENAME
        self._lock = threading.Lock()
        self._path.parent.mkdir(parents=True, exist_ok=True)
        if self._path.exists():
            self._state = self._load()
        else:
            self._state = _empty_state()
            self._persist()

    def _load(self) -> dict:
        with self._path.open(encoding="utf-8") as fh:
            state = json.load(fh)
        version = state.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ValidationError(
                f"data directory holds schema version {version}, expected {SCHEMA_VERSION}"
            )
        return state

    def _persist(self) -> None:
        tmp_path = self._path.with_suffix(".json.tmp")
        payload = json.dumps(self._state, indent=2, sort_keys=True)
        with tmp_path.open("w", encoding="utf-8") as fh:
            fh.write(payload + "\n")
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp_path, self._path)

    # -- users ----------------------------------------------------------------

    def add_user(self, folder_id: str, api_key_hash: str, role: str, created_at: str) -> dict:
        with self._lock:
            if folder_id in self._state["users"]:
                raise DuplicateUser(f"folder id {folder_id!r} already registered")
            record = {
                "folder_id": folder_id,
                "api_key_hash": api_key_hash,
                "role": role,
                "created_at": created_at,
            }
            self._state["users"][folder_id] = record
            self._persist()
            return dict(record)

    def get_user(self, folder_id: str) -> dict | None:
        with self._lock:
            record = self._state["users"].get(folder_id)
            return dict(record) if record else None

    def users(self) -> list[dict]:
        with self._lock:
            return [dict(r) for r in self._state["users"].values()]

    # -- deployments ----------------------------------------------------------

    def add_deployment(self, record: dict) -> None:
        with self._lock:
            dep_id = record["deployment_id"]
            if dep_id in self._state["deployments"]:
                raise ValidationError(f"deployment {dep_id!r} already stored")
            self._state["deployments"][dep_id] = dict(record)
            self._persist()

    def get_deployment(self, deployment_id: str) -> dict | None:
        with self._lock:
            record = self._state["deployments"].get(deployment_id)
            return dict(record) if record else None

    def deployments(self, folder_id: str | None = None) -> list[dict]:
        with self._lock:
            records = [dict(r) for r in self._state["deployments"].values()]
        if folder_id is not None:
            records = [r for r in records if r["folder_id"] == folder_id]
        return sorted(records, key=lambda r: r["deployment_id"])

    def update_deployment_status(self, deployment_id: str, status: str) -> None:
        with self._lock:
            record = self._state["deployments"].get(deployment_id)
            if record is None:
                raise NotFound(f"deployment {deployment_id!r} not stored")
            if record["status"] != status:
                record["status"] = status
                self._persist()

    # -- port assignments -------------------------------------------------------

    def set_port_assignments(self, assignments: dict[int, tuple[str, int]]) -> None:
        with self._lock:
            self._state["port_assignments"] = {
                str(node_port): [dep_id, container_port]
                for node_port, (dep_id, container_port) in assignments.items()
            }
            self._persist()

    def port_assignments(self) -> dict[int, tuple[str, int]]:
        with self._lock:
            return {
                int(node_port): (dep_id, int(container_port))
                for node_port, (dep_id, container_port) in self._state["port_assignments"].items()
            }
