"""Versioned key-value world state with staged per-transaction writes.

Records live under (kind, id). A transaction executes against a TxContext
that stages puts privately; reads see the transaction's own staged writes
first. Commit applies the stage atomically, so a rejected transaction
leaves no trace. Records are never deleted, only overwritten (revocation
is a status change), which keeps the audit surface complete.

The state digest is the SHA-256 of the canonical JSON array of all records
sorted by (kind, id); two nodes that executed the same accepted transactions
in the same order always agree on it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional

from .canonical import NonCanonicalError, canonical_dumps, sha256_hex
from .errors import TxError

KINDS = (
    "Participant",
    "Organization",
    "Asset",
    "AccessRequest",
    "RoleBinding",
    "IdentityCard",
)


@dataclass(frozen=True)
class StateRecord:
    kind: str
    record_id: str
    body: dict
    version: int  # bumps once per accepted transaction that writes this record

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "id": self.record_id,
            "body": self.body,
            "version": self.version,
        }


class WorldState:
    """Committed records; mutate only through TxContext.commit."""

    def __init__(self):
        self._records: dict = {}  # (kind, id) -> StateRecord

    def get(self, kind: str, record_id: str) -> Optional[StateRecord]:
        return self._records.get((kind, record_id))

    def list_records(self, kind: Optional[str] = None) -> list:
        records = [
            rec for key, rec in self._records.items() if kind is None or key[0] == kind
        ]
        records.sort(key=lambda r: (r.kind, r.record_id))
        return records

    def __len__(self) -> int:
        return len(self._records)

    def copy(self) -> "WorldState":
        clone = WorldState()
        clone._records = dict(self._records)
        return clone

    def state_hash(self) -> str:
        body = [rec.to_json() for rec in self.list_records()]
        return sha256_hex(canonical_dumps(body))


class TxContext:
    """One transaction's staged view over a WorldState.

    Reads fall through to the base state unless this transaction staged a
    write for the same key. Nothing touches the base until commit().
    """

    def __init__(self, base: WorldState, height: int, tx_id: str, timestamp: int, submitter: str):
        self.base = base
        self.height = height
        self.tx_id = tx_id
        self.timestamp = timestamp
        self.submitter = submitter
        self.events: list = []
        self._staged: dict = {}  # (kind, id) -> StateRecord

    # -- reads -----------------------------------------------------------

    def get(self, kind: str, record_id: str) -> Optional[StateRecord]:
        key = (kind, record_id)
        if key in self._staged:
            return self._staged[key]
        return self.base.get(kind, record_id)

    def exists(self, kind: str, record_id: str) -> bool:
        return self.get(kind, record_id) is not None

    def list_records(self, kind: str) -> list:
        merged: dict = {
            (rec.kind, rec.record_id): rec for rec in self.base.list_records(kind)
        }
        for key, rec in self._staged.items():
            if key[0] == kind:
                merged[key] = rec
        records = list(merged.values())
        records.sort(key=lambda r: (r.kind, r.record_id))
        return records

    # -- writes ----------------------------------------------------------

    def put(self, kind: str, record_id: str, body: dict) -> StateRecord:
        if kind not in KINDS:
            raise ValueError(f"unknown record kind: {kind}")
        try:
            canonical_dumps(body)
        except NonCanonicalError as exc:
            raise TxError("NON_CANONICAL_BODY", str(exc)) from None
        # version counts committed writes: restaging within one tx keeps
        # the same bump, so two puts in one tx advance the version once
        committed = self.base.get(kind, record_id)
        version = committed.version + 1 if committed is not None else 1
        record = StateRecord(kind=kind, record_id=record_id, body=body, version=version)
        self._staged[(kind, record_id)] = record
        return record

    def emit(self, kind: str, record_kind: str, record_id: str, **extra: Any) -> None:
        event = {"kind": kind, "recordKind": record_kind, "recordId": record_id}
        event.update(extra)
        self.events.append(event)

    # -- lifecycle ---------------------------------------------------------

    def commit(self) -> None:
        self.base._records.update(self._staged)
        self._staged = {}
