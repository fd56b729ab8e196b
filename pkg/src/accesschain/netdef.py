"""Line-oriented network model grammar: declared types and payload schemas.

A model file names the network and declares participants, assets, and
transactions::

    network access-control

    participant Person {
      participantId: string required
      displayName: string required
      orgId: string
    }

    transaction GiveAccess {
      assetId: string required
      viewers: stringList required
      editors: stringList required
      requestId: string
    }

Field types: string, integer, boolean, stringList, object. ``required``
is the only field modifier. ``#`` starts a comment (full line or trailing).
A node may load several model files; declared type names must stay unique
across all of them and at most one file names the network.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

FIELD_TYPES = ("string", "integer", "boolean", "stringList", "object")
DECL_KINDS = ("participant", "asset", "transaction")

MISSING = "MISSING"
WRONG_TYPE = "WRONG_TYPE"
UNDECLARED = "UNDECLARED"

_NETWORK_RE = re.compile(r"^network\s+([A-Za-z_][A-Za-z0-9_.-]*)$")
_DECL_RE = re.compile(r"^(participant|asset|transaction)\s+([A-Za-z_][A-Za-z0-9_]*)\s*\{$")
_FIELD_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*:\s*([A-Za-z]+)(\s+required)?$")


class ModelError(Exception):
    def __init__(self, code: str, message: str, line: int | None = None):
        detail = f"line {line}: {message}" if line is not None else message
        super().__init__(detail)
        self.code = code
        self.line = line


@dataclass(frozen=True)
class Violation:
    field: str
    reason: str  # MISSING | WRONG_TYPE | UNDECLARED


@dataclass(frozen=True)
class FieldDef:
    name: str
    field_type: str
    required: bool


@dataclass(frozen=True)
class TypeDef:
    decl_kind: str  # participant | asset | transaction
    name: str
    fields: tuple  # (FieldDef, ...)

    def field_map(self) -> dict:
        return {f.name: f for f in self.fields}


def _value_matches(value, field_type: str) -> bool:
    if field_type == "string":
        return isinstance(value, str)
    if field_type == "integer":
        return isinstance(value, int) and not isinstance(value, bool)
    if field_type == "boolean":
        return isinstance(value, bool)
    if field_type == "stringList":
        return isinstance(value, list) and all(isinstance(v, str) for v in value)
    if field_type == "object":
        return isinstance(value, dict)
    return False


@dataclass
class NetworkModel:
    network_name: str = ""
    types: dict = field(default_factory=dict)  # name -> TypeDef

    def add(self, type_def: TypeDef) -> None:
        if type_def.name in self.types:
            raise ModelError("DUPLICATE_TYPE", f"type {type_def.name} declared twice")
        self.types[type_def.name] = type_def

    def declared(self, decl_kind: str) -> list:
        return sorted(
            (t for t in self.types.values() if t.decl_kind == decl_kind),
            key=lambda t: t.name,
        )

    def has_transaction(self, name: str) -> bool:
        t = self.types.get(name)
        return t is not None and t.decl_kind == "transaction"

    def validate_payload(self, tx_type: str, payload: dict) -> list:
        """All schema violations for this payload; empty list means Ok."""
        t = self.types.get(tx_type)
        if t is None or t.decl_kind != "transaction":
            raise ModelError("UNKNOWN_TX_TYPE", f"no transaction type {tx_type}")
        fields = t.field_map()
        violations = []
        for name in sorted(payload):
            if name not in fields:
                violations.append(Violation(name, UNDECLARED))
        for f in t.fields:
            if f.name not in payload:
                if f.required:
                    violations.append(Violation(f.name, MISSING))
            elif not _value_matches(payload[f.name], f.field_type):
                violations.append(Violation(f.name, WRONG_TYPE))
        return violations


def parse_model(text: str, model: NetworkModel | None = None) -> NetworkModel:
    """Parse one model file into (or onto) a NetworkModel."""
    model = model if model is not None else NetworkModel()
    current_name: str | None = None
    current_kind: str | None = None
    current_fields: list = []
    seen_fields: set = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if current_name is None:
            m = _NETWORK_RE.match(line)
            if m:
                if model.network_name:
                    raise ModelError("SYNTAX_ERROR", "network name already declared", lineno)
                model.network_name = m.group(1)
                continue
            m = _DECL_RE.match(line)
            if not m:
                raise ModelError("SYNTAX_ERROR", f"expected declaration, got {line!r}", lineno)
            current_kind, current_name = m.group(1), m.group(2)
            current_fields = []
            seen_fields = set()
            continue
        if line == "}":
            model.add(TypeDef(current_kind, current_name, tuple(current_fields)))
            current_name = None
            continue
        m = _FIELD_RE.match(line)
        if not m:
            raise ModelError("SYNTAX_ERROR", f"bad field line {line!r}", lineno)
        fname, ftype, req = m.group(1), m.group(2), bool(m.group(3))
        if ftype not in FIELD_TYPES:
            raise ModelError("UNKNOWN_FIELD_TYPE", f"field {fname}: {ftype}", lineno)
        if fname in seen_fields:
            raise ModelError("SYNTAX_ERROR", f"field {fname} declared twice", lineno)
        seen_fields.add(fname)
        current_fields.append(FieldDef(fname, ftype, req))

    if current_name is not None:
        raise ModelError("SYNTAX_ERROR", f"unterminated block {current_name}", None)
    return model


def render_model(model: NetworkModel) -> str:
    """Canonical text form; parse_model(render_model(m)) reproduces m."""
    chunks = []
    if model.network_name:
        chunks.append(f"network {model.network_name}\n")
    for decl_kind in DECL_KINDS:
        for t in model.declared(decl_kind):
            lines = [f"{t.decl_kind} {t.name} {{"]
            for f in t.fields:
                suffix = " required" if f.required else ""
                lines.append(f"  {f.name}: {f.field_type}{suffix}")
            lines.append("}")
            chunks.append("\n".join(lines) + "\n")
    return "\n".join(chunks)


def load_models(paths) -> NetworkModel:
    """Parse and merge several model files; names must be globally unique."""
    model = NetworkModel()
    for path in paths:
        parse_model(Path(path).read_text(encoding="utf-8"), model)
    return model
