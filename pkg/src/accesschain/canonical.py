"""Canonical JSON serialization and hashing.

Every byte string that gets hashed or signed anywhere in the system goes
through :func:`canonical_dumps`, so two independent encoders must agree
bit-for-bit: UTF-8, object keys sorted ascending by their encoded bytes,
no insignificant whitespace, and no floats (consensus-critical numbers
are integers only).
"""

from __future__ import annotations

import hashlib
import json
from typing import Any

HEX_DIGEST_LEN = 64
ZERO_DIGEST = "0" * HEX_DIGEST_LEN


class NonCanonicalError(ValueError):
    """Value cannot be represented in canonical JSON."""

    def __init__(self, message: str):
        super().__init__(message)
        self.code = "NON_CANONICAL"


def _check_canonical(value: Any, path: str) -> None:
    if value is None or isinstance(value, str):
        return
    # bool must be tested before int: bool is an int subclass
    if isinstance(value, bool):
        return
    if isinstance(value, int):
        return
    if isinstance(value, float):
        raise NonCanonicalError(f"float at {path} (integers only)")
    if isinstance(value, dict):
        for key in value:
            if not isinstance(key, str):
                raise NonCanonicalError(f"non-string key {key!r} at {path}")
            _check_canonical(value[key], f"{path}.{key}")
        return
    if isinstance(value, (list, tuple)):
        for i, item in enumerate(value):
            _check_canonical(item, f"{path}[{i}]")
        return
    raise NonCanonicalError(f"unsupported type {type(value).__name__} at {path}")


def canonical_dumps(value: Any) -> bytes:
    """Serialize to canonical JSON bytes; raises NonCanonicalError for
    floats, non-string keys, or non-JSON types.

    For str keys, Python's sort order (code points) matches byte-wise
    ordering of their UTF-8 encodings, so sort_keys is sufficient.
    """
    _check_canonical(value, "$")
    text = json.dumps(
        value,
        sort_keys=True,
        separators=(",", ":"),
        ensure_ascii=False,
        allow_nan=False,
    )
    return text.encode("utf-8")


def canonical_loads(data: bytes) -> Any:
    """Parse JSON bytes, rejecting floats so a round trip stays canonical."""

    def _no_floats(s: str) -> float:
        raise NonCanonicalError(f"float literal {s!r} in canonical input")

    try:
        return json.loads(data.decode("utf-8"), parse_float=_no_floats, parse_constant=_no_floats)
    except UnicodeDecodeError as exc:
        raise NonCanonicalError(f"input is not UTF-8: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise NonCanonicalError(f"invalid JSON: {exc}") from exc


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def hash_canonical(value: Any) -> str:
    """Lowercase hex SHA-256 of the canonical encoding of ``value``."""
    return sha256_hex(canonical_dumps(value))
