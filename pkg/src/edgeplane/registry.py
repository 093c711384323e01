"""Image architecture resolution and node-type selection.

Which CPU architectures an image was built for decides where it may run.
Resolution is fixture-backed by default so nothing here touches the network;
live lookups against a registry's HTTP API are opt-in through configuration.
"""

from __future__ import annotations

import threading
from typing import Iterable, Mapping, Sequence

import requests

from .errors import NoCompatibleNode, RegistryUnavailable, ValidationError

ARCH_LABELS = ("amd", "arm", "riscv")

# Registry platform identifiers normalized onto the closed label set.
PLATFORM_ALIASES = {
    "amd": "amd",
    "amd64": "amd",
    "x86_64": "amd",
    "x86-64": "amd",
    "arm": "arm",
    "arm64": "arm",
    "aarch64": "arm",
    "arm/v7": "arm",
    "armv7": "arm",
    "riscv": "riscv",
    "riscv64": "riscv",
}

# Images resolvable without network access or a fixture file. nginx is
# published for x86-64 here; the rest are common multi-arch images.
DEFAULT_FIXTURE: dict[str, tuple[str, ...]] = {
    "nginx": ("amd",),
    "httpd": ("amd", "arm"),
    "redis": ("amd", "arm"),
    "eclipse-mosquitto": ("amd", "arm"),
    "alpine": ("amd", "arm", "riscv"),
    "busybox": ("amd", "arm", "riscv"),
}

_MANIFEST_LIST_ACCEPT = (
    "application/vnd.docker.distribution.manifest.list.v2+json, "
    "application/vnd.oci.image.index.v1+json"
)


def normalize_platform(value: str) -> str | None:
    return PLATFORM_ALIASES.get(value.strip().lower())


def validate_fixture(entries: Mapping[str, Sequence[str]]) -> dict[str, tuple[str, ...]]:
    fixture = {}
    for image, archs in entries.items():
        labels = tuple(archs)
        for label in labels:
            if label not in ARCH_LABELS:
                raise ValidationError(
                    f"fixture entry {image!r}: unknown architecture label {label!r}"
                )
        fixture[str(image)] = labels
    return fixture


class ArchitectureResolver:
    """Resolve image references to the ordered architecture lists they support.

    Fixture mode is a pure lookup (unknown images resolve to an empty list).
    Live mode fetches the image's multi-platform index and caches the result
    for the process lifetime; concurrent lookups may race but converge on
    identical entries because responses are deterministic per image.
    """

    def __init__(
        self,
        fixture: Mapping[str, Sequence[str]] | None = None,
        live_base_url: str | None = None,
        timeout: float = 5.0,
    ):
        self._fixture = validate_fixture(fixture if fixture is not None else DEFAULT_FIXTURE)
        self._live_base_url = live_base_url.rstrip("/") if live_base_url else None
        self._timeout = timeout
        self._cache: dict[str, list[str]] = {}
        self._lock = threading.Lock()

    @property
    def live(self) -> bool:
        return self._live_base_url is not None

    def resolve(self, image: str) -> list[str]:
        if not image:
            raise ValidationError("image reference must be non-empty")
        if not self.live:
            return list(self._fixture.get(image, ()))
        with self._lock:
            cached = self._cache.get(image)
        if cached is not None:
            return list(cached)
        archs = self._resolve_live(image)
        with self._lock:
            self._cache.setdefault(image, archs)
            return list(self._cache[image])

    def _resolve_live(self, image: str) -> list[str]:
        repo, _, tag = image.partition(":")
        url = f"{self._live_base_url}/v2/{repo}/manifests/{tag or 'latest'}"
        try:
            response = requests.get(
                url, headers={"Accept": _MANIFEST_LIST_ACCEPT}, timeout=self._timeout
            )
        except requests.RequestException as exc:
            raise RegistryUnavailable(f"registry lookup failed for {image!r}: {exc}") from exc
        if response.status_code == 404:
            return []
        if response.status_code != 200:
            raise RegistryUnavailable(
                f"registry returned {response.status_code} for {image!r}"
            )
        try:
            body = response.json()
        except ValueError as exc:
            raise RegistryUnavailable(f"registry returned a non-JSON body for {image!r}") from exc
        return _archs_from_index(body)


def _archs_from_index(body: Mapping) -> list[str]:
    # Multi-platform index: ordered platform entries. A single-manifest
    # response carries one architecture at the top level.
    entries: Iterable[str]
    if isinstance(body.get("manifests"), list):
        entries = (
            str(item.get("platform", {}).get("architecture", ""))
            for item in body["manifests"]
            if isinstance(item, dict)
        )
    elif body.get("architecture"):
        entries = (str(body["architecture"]),)
    else:
        entries = ()
    archs: list[str] = []
    for entry in entries:
        label = normalize_platform(entry)
        if label and label not in archs:
            archs.append(label)
    return archs


def select_node_type(archs: Sequence[str], inventory: Iterable[str]) -> str:
    """Pick the node type to schedule on: the first supported architecture
    that the cluster currently offers with free capacity."""
    if not archs:
        raise ValidationError("architecture list must be non-empty")
    available = set(inventory)
    for arch in archs:
        if arch in available:
            return arch
    raise NoCompatibleNode(
        f"no node with free capacity matches supported architectures {list(archs)}"
    )
