"""Canonical JSON serialization used by every document format.

All artifacts (class documents, bundle index, reports, graphs, plans) share
one convention: UTF-8 JSON, keys sorted lexicographically at every level,
2-space indentation, LF line endings, one trailing newline. Equal values
serialize to byte-equal documents, which is what makes the artifacts
CI-diffable and lets tests assert byte identity.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any

from .errors import MalformedDocument


def dumps_canonical(value: Any) -> str:
    """Serialize ``value`` to the canonical document text."""
    return json.dumps(value, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def loads_document(text: str) -> Any:
    """Parse JSON text, mapping syntax errors to :class:`MalformedDocument`."""
    try:
        return json.loads(text)
    except (json.JSONDecodeError, TypeError, ValueError) as exc:
        raise MalformedDocument(f"not valid JSON: {exc}") from exc


def fingerprint(data: bytes) -> str:
    """Content hash of a document, as ``sha256:<hex>``."""
    return "sha256:" + hashlib.sha256(data).hexdigest()
