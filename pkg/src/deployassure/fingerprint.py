"""Deterministic fingerprints for configuration payloads."""

from __future__ import annotations

import hashlib
import json


def canonical_fingerprint(payload: object) -> str:
    """Hash a JSON-serialisable payload to a short stable hex string."""
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]
