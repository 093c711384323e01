"""Tenant credentials and API-key hashing.

Keys are never stored in clear: records hold a salted PBKDF2-SHA256 digest in
a self-describing string (``pbkdf2_sha256$<iterations>$<salt>$<digest>``).
Verification is constant-time on the digest comparison.
"""

from __future__ import annotations

import hashlib
import hmac
import os
from dataclasses import dataclass

ROLE_ADMIN = "admin"
ROLE_USER = "user"

DEFAULT_ITERATIONS = 60_000
_SCHEME = "pbkdf2_sha256"


@dataclass(frozen=True)
class Credential:
    folder_id: str
    api_key: str


@dataclass(frozen=True)
class Principal:
    folder_id: str
    role: str

    @property
    def is_admin(self) -> bool:
        return self.role == ROLE_ADMIN


def hash_api_key(api_key: str, iterations: int = DEFAULT_ITERATIONS) -> str:
    salt = os.urandom(16)
    digest = hashlib.pbkdf2_hmac("sha256", api_key.encode(), salt, iterations)
    return f"{_SCHEME}${iterations}${salt.hex()}${digest.hex()}"


def verify_api_key(api_key: str, stored: str) -> bool:
    try:
        scheme, iterations, salt_hex, digest_hex = stored.split("$")
        if scheme != _SCHEME:
            return False
        candidate = hashlib.pbkdf2_hmac(
            "sha256", api_key.encode(), bytes.fromhex(salt_hex), int(iterations)
        )
        return hmac.compare_digest(candidate, bytes.fromhex(digest_hex))
    except (ValueError, AttributeError):
        return False


# Verified against on lookups for unknown folder ids so the work done (and
# the caller-visible failure) is the same as for a wrong key.
DUMMY_HASH = hash_api_key("unmatchable", iterations=DEFAULT_ITERATIONS)
