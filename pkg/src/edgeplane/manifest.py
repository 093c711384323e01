"""Deployment manifest rendering.

A Deployment document is produced by filling a fixed template, so identical
inputs always yield byte-identical text (UTF-8, LF line endings, two-space
indentation). Requests and limits are intentionally set to the same values,
and the pod placement constraint is expressed through a ``node_type``
nodeSelector. Ports are expanded to one ``containerPort`` list item each via
:func:`port_to_text`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .errors import ValidationError

# RFC 1123 label: what Kubernetes accepts for object/container names.
DNS_LABEL_RE = re.compile(r"^[a-z0-9]([a-z0-9-]*[a-z0-9])?$")
MAX_NAME_LEN = 63

DEPLOYMENT_TEMPLATE = """apiVersion: apps/v1
kind: Deployment
metadata:
  name: {name}-deployment
  labels:
    app: {name}
spec:
  replicas: 1
  selector:
    matchLabels:
      app: {name}
  template:
    metadata:
      labels:
        app: {name}
    spec:
      restartPolicy: Always
      nodeSelector:
        node_type: {compatible}
      containers:
      - name: {name}
        image: {image}
        ports:
        {all_ports}
        resources:
          requests:
            memory: "{memory}Mi"
            cpu: "{cpu}m"
          limits:
            memory: "{memory}Mi"
            cpu: "{cpu}m"
"""

# Continuation list items line up under the first one inside the template.
_PORTS_INDENT = " " * 8


def validate_name(name: str) -> None:
    if not isinstance(name, str) or not name:
        raise ValidationError("name must be a non-empty string")
    if len(name) > MAX_NAME_LEN:
        raise ValidationError(f"name {name!r} exceeds {MAX_NAME_LEN} characters")
    if not DNS_LABEL_RE.match(name):
        raise ValidationError(
            f"name {name!r} is not a valid DNS label (lowercase alphanumerics and hyphens)"
        )


def validate_ports(ports: Sequence[int]) -> None:
    if not ports:
        raise ValidationError("at least one container port is required")
    seen = set()
    for port in ports:
        if not isinstance(port, int) or isinstance(port, bool):
            raise ValidationError(f"port {port!r} is not an integer")
        if not 1 <= port <= 65535:
            raise ValidationError(f"port {port} outside 1-65535")
        if port in seen:
            raise ValidationError(f"duplicate port {port}")
        seen.add(port)


@dataclass(frozen=True)
class ManifestInput:
    """Values for the template placeholders: name, compatible, image,
    all_ports, memory (Mi) and cpu (m)."""

    name: str
    compatible: str
    image: str
    all_ports: tuple[int, ...]
    memory: int
    cpu: int

    def validate(self) -> None:
        validate_name(self.name)
        if not self.compatible:
            raise ValidationError("compatible node type must be non-empty")
        if not self.image:
            raise ValidationError("image must be non-empty")
        validate_ports(self.all_ports)
        if not isinstance(self.memory, int) or self.memory < 1:
            raise ValidationError("memory must be a positive integer (Mi)")
        if not isinstance(self.cpu, int) or self.cpu < 1:
            raise ValidationError("cpu must be a positive integer (millicores)")


def port_to_text(ports: Sequence[int]) -> str:
    """Render the ports block: one ``- containerPort: N`` item per port.

    Continuation items carry the indentation they need at the template's
    insertion point, so the block can be substituted directly. An empty list
    renders as the empty string.
    """
    return ("\n" + _PORTS_INDENT).join(f"- containerPort: {p}" for p in ports)


def port_text_beautify(text: str) -> str:
    """Normalize port-mapping list text into a pipe-separated form.

    Each ``- "`` list-item prefix collapses into a ``|`` separator, runs of
    spaces collapse to a single space, and a ``| `` terminator is appended.
    """
    if not text:
        raise ValidationError("port text must be non-empty")
    out = text.replace('- "', "|")
    out = re.sub(r" {2,}", " ", out)
    return out + "| "


def render_deployment_manifest(manifest_input: ManifestInput) -> str:
    """Fill the Deployment template; deterministic for identical inputs."""
    manifest_input.validate()
    return DEPLOYMENT_TEMPLATE.format(
        name=manifest_input.name,
        compatible=manifest_input.compatible,
        image=manifest_input.image,
        all_ports=port_to_text(manifest_input.all_ports),
        memory=manifest_input.memory,
        cpu=manifest_input.cpu,
    )
