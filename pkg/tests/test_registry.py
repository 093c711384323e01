from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edgeplane.errors import NoCompatibleNode, RegistryUnavailable, ValidationError
from edgeplane.registry import (
    ArchitectureResolver,
    normalize_platform,
    select_node_type,
)


def test_nginx_resolves_to_amd_under_default_fixture():
    assert ArchitectureResolver().resolve("nginx") == ["amd"]


def test_unknown_image_resolves_to_empty_list():
    assert ArchitectureResolver().resolve("something-wrong") == []


def test_custom_fixture_echoes_order():
    resolver = ArchitectureResolver(fixture={"multi-img": ["arm", "amd"]})
    assert resolver.resolve("multi-img") == ["arm", "amd"]


def test_empty_image_rejected():
    with pytest.raises(ValidationError):
        ArchitectureResolver().resolve("")


def test_fixture_with_unknown_label_rejected():
    with pytest.raises(ValidationError):
        ArchitectureResolver(fixture={"img": ["mips"]})


def test_fixture_resolution_is_pure():
    resolver = ArchitectureResolver(fixture={"img": ["amd"]})
    assert resolver.resolve("img") == resolver.resolve("img") == ["amd"]


@pytest.mark.parametrize(
    ("platform", "label"),
    [
        ("amd64", "amd"),
        ("x86_64", "amd"),
        ("arm64", "arm"),
        ("aarch64", "arm"),
        ("arm/v7", "arm"),
        ("riscv64", "riscv"),
        ("s390x", None),
    ],
)
def test_platform_normalization(platform, label):
    assert normalize_platform(platform) == label


# -- node-type selection -----------------------------------------------------


def test_select_direct_membership():
    assert select_node_type(["amd"], {"amd", "arm"}) == "amd"


def test_select_first_present_wins():
    # Oracle: first-match scan over the preference order.
    archs, inventory = ["arm", "amd"], {"amd"}
    expected = next(a for a in archs if a in inventory)
    assert select_node_type(archs, inventory) == expected == "amd"


def test_select_no_overlap_raises():
    with pytest.raises(NoCompatibleNode):
        select_node_type(["riscv"], {"amd"})


def test_select_empty_archs_rejected():
    with pytest.raises(ValidationError):
        select_node_type([], {"amd"})


@settings(max_examples=100, deadline=None)
@given(
    archs=st.lists(st.sampled_from(["amd", "arm", "riscv"]), min_size=1, max_size=3,
                   unique=True),
    inventory=st.sets(st.sampled_from(["amd", "arm", "riscv"]), max_size=3),
)
def test_select_result_member_of_both(archs, inventory):
    if not set(archs) & inventory:
        with pytest.raises(NoCompatibleNode):
            select_node_type(archs, inventory)
        return
    picked = select_node_type(archs, inventory)
    assert picked in archs and picked in inventory
    # Order sensitivity: any permutation still picks from the overlap.
    assert picked == next(a for a in archs if a in inventory)


# -- live mode against a stub registry ----------------------------------------


class _StubRegistry(BaseHTTPRequestHandler):
    responses: dict[str, tuple[int, dict]] = {}

    def do_GET(self):
        status, body = self.responses.get(self.path, (404, {}))
        payload = json.dumps(body).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def log_message(self, *args):
        pass


@pytest.fixture
def stub_registry():
    server = HTTPServer(("127.0.0.1", 0), _StubRegistry)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    _StubRegistry.responses = {
        "/v2/nginx/manifests/latest": (
            200,
            {
                "manifests": [
                    {"platform": {"architecture": "amd64"}},
                    {"platform": {"architecture": "arm64"}},
                    {"platform": {"architecture": "s390x"}},
                ]
            },
        ),
        "/v2/single/manifests/latest": (200, {"architecture": "riscv64"}),
        "/v2/broken/manifests/latest": (500, {}),
    }
    yield f"http://127.0.0.1:{server.server_port}"
    server.shutdown()


def test_live_lookup_maps_platforms_in_index_order(stub_registry):
    resolver = ArchitectureResolver(live_base_url=stub_registry)
    assert resolver.resolve("nginx") == ["amd", "arm"]


def test_live_lookup_single_manifest(stub_registry):
    resolver = ArchitectureResolver(live_base_url=stub_registry)
    assert resolver.resolve("single") == ["riscv"]


def test_live_lookup_unknown_image_is_empty_not_an_error(stub_registry):
    resolver = ArchitectureResolver(live_base_url=stub_registry)
    assert resolver.resolve("ghost") == []


def test_live_lookup_server_error_raises(stub_registry):
    resolver = ArchitectureResolver(live_base_url=stub_registry)
    with pytest.raises(RegistryUnavailable):
        resolver.resolve("broken")


def test_live_lookup_network_failure_raises():
    resolver = ArchitectureResolver(live_base_url="http://127.0.0.1:1", timeout=0.2)
    with pytest.raises(RegistryUnavailable):
        resolver.resolve("nginx")


def test_live_lookup_cached_for_process_lifetime(stub_registry):
    resolver = ArchitectureResolver(live_base_url=stub_registry)
    assert resolver.resolve("nginx") == ["amd", "arm"]
    _StubRegistry.responses["/v2/nginx/manifests/latest"] = (500, {})
    assert resolver.resolve("nginx") == ["amd", "arm"]
