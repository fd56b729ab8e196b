"""Append-only hash-chained ledger: envelopes, blocks, verification, historian.

A block commits to its full contents (``blockHash`` is the SHA-256 of the
canonical block body with the hash field absent) and to the post-block world
state (``stateHash``), so any single-byte mutation of persisted data is
detectable. Blocks link through ``prevHash``; genesis links to 64 zeros.
"""

from __future__ import annotations

import struct
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Optional

from .canonical import ZERO_DIGEST, canonical_dumps, canonical_loads, sha256_hex
from .errors import ChainError, MalformedEnvelope

ACCEPTED = "ACCEPTED"
REJECTED = "REJECTED"

# Per-block entry cap for a single commit batch.
MAX_BATCH = 100

_LEN_PREFIX = struct.Struct(">I")


# ---------------------------------------------------------------------------
# Envelope and result
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TxEnvelope:
    """A certificate-signed transaction submission.

    ``signature`` is a detached base64 Ed25519 signature over the canonical
    bytes of the envelope with the signature field absent.
    """

    tx_id: str
    tx_type: str
    payload: dict
    submitter: str
    timestamp: int  # ms since epoch, submitter-claimed
    signature: str

    def signing_body(self) -> dict:
        return {
            "txId": self.tx_id,
            "txType": self.tx_type,
            "payload": self.payload,
            "submitter": self.submitter,
            "timestamp": self.timestamp,
        }

    def signing_bytes(self) -> bytes:
        return canonical_dumps(self.signing_body())

    def to_json(self) -> dict:
        body = self.signing_body()
        body["signature"] = self.signature
        return body

    @classmethod
    def from_json(cls, obj: Any) -> "TxEnvelope":
        if not isinstance(obj, dict):
            raise MalformedEnvelope("envelope must be a JSON object")
        required = {"txId", "txType", "payload", "submitter", "timestamp", "signature"}
        missing = required - obj.keys()
        if missing:
            raise MalformedEnvelope(f"missing fields: {sorted(missing)}")
        extra = obj.keys() - required
        if extra:
            raise MalformedEnvelope(f"unexpected fields: {sorted(extra)}")
        tx_id = obj["txId"]
        if not isinstance(tx_id, str):
            raise MalformedEnvelope("txId must be a string")
        try:
            uuid.UUID(tx_id)
        except ValueError:
            raise MalformedEnvelope("txId is not UUID-format") from None
        if not isinstance(obj["txType"], str) or not obj["txType"]:
            raise MalformedEnvelope("txType must be a non-empty string")
        if not isinstance(obj["payload"], dict):
            raise MalformedEnvelope("payload must be a JSON object")
        if not isinstance(obj["submitter"], str) or not obj["submitter"]:
            raise MalformedEnvelope("submitter must be a non-empty string")
        ts = obj["timestamp"]
        if isinstance(ts, bool) or not isinstance(ts, int) or ts < 0:
            raise MalformedEnvelope("timestamp must be a non-negative integer")
        if not isinstance(obj["signature"], str):
            raise MalformedEnvelope("signature must be a base64 string")
        env = cls(
            tx_id=tx_id,
            tx_type=obj["txType"],
            payload=obj["payload"],
            submitter=obj["submitter"],
            timestamp=ts,
            signature=obj["signature"],
        )
        try:
            env.signing_bytes()
        except ValueError as exc:
            raise MalformedEnvelope(f"payload is not canonical JSON: {exc}") from None
        return env


@dataclass(frozen=True)
class TxResult:
    status: str  # ACCEPTED | REJECTED
    error_code: Optional[str] = None
    events: tuple = ()  # dicts {kind, recordKind, recordId, ...}
    result: Any = None  # processor return value, canonical JSON

    def __post_init__(self):
        if self.status == REJECTED and self.events:
            raise ValueError("REJECTED result must carry no events")

    def to_json(self) -> dict:
        obj: dict = {"status": self.status, "events": list(self.events)}
        if self.error_code is not None:
            obj["errorCode"] = self.error_code
        if self.result is not None:
            obj["result"] = self.result
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "TxResult":
        return cls(
            status=obj["status"],
            error_code=obj.get("errorCode"),
            events=tuple(obj.get("events", [])),
            result=obj.get("result"),
        )


# ---------------------------------------------------------------------------
# Blocks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Block:
    height: int
    prev_hash: str
    seal_timestamp: int  # ms, committer clock at seal time
    entries: tuple  # ((TxEnvelope, TxResult), ...)
    state_hash: str
    block_hash: str

    def body_json(self) -> dict:
        """Block JSON with blockHash absent; the hashed canonical form."""
        return {
            "height": self.height,
            "prevHash": self.prev_hash,
            "sealTimestamp": self.seal_timestamp,
            "entries": [
                {"envelope": env.to_json(), "result": res.to_json()}
                for env, res in self.entries
            ],
            "stateHash": self.state_hash,
        }

    def to_json(self) -> dict:
        obj = self.body_json()
        obj["blockHash"] = self.block_hash
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "Block":
        entries = tuple(
            (TxEnvelope.from_json(e["envelope"]), TxResult.from_json(e["result"]))
            for e in obj["entries"]
        )
        return cls(
            height=obj["height"],
            prev_hash=obj["prevHash"],
            seal_timestamp=obj["sealTimestamp"],
            entries=entries,
            state_hash=obj["stateHash"],
            block_hash=obj["blockHash"],
        )


def compute_block_hash(body: dict) -> str:
    return sha256_hex(canonical_dumps(body))


def build_block(
    height: int,
    prev_hash: str,
    seal_timestamp: int,
    entries: Iterable[tuple],
    state_hash: str,
) -> Block:
    entries = tuple(entries)
    body = {
        "height": height,
        "prevHash": prev_hash,
        "sealTimestamp": seal_timestamp,
        "entries": [
            {"envelope": env.to_json(), "result": res.to_json()} for env, res in entries
        ],
        "stateHash": state_hash,
    }
    return Block(
        height=height,
        prev_hash=prev_hash,
        seal_timestamp=seal_timestamp,
        entries=entries,
        state_hash=state_hash,
        block_hash=compute_block_hash(body),
    )


def make_genesis(entries: Iterable[tuple], state_hash: str, seal_timestamp: int) -> Block:
    """Genesis may be empty; ordinary blocks may not."""
    return build_block(0, ZERO_DIGEST, seal_timestamp, entries, state_hash)


def seal_block(
    pending: Iterable[tuple],
    parent: Block,
    post_state_hash: str,
    seal_timestamp: int,
    *,
    tip: Optional[Block] = None,
) -> Block:
    """Seal one block of executed entries on top of ``parent``.

    ``tip`` is the committer's view of the current chain head; passing a
    stale parent is an error so a forked append can never happen silently.
    """
    pending = tuple(pending)
    if not pending:
        raise ChainError("EMPTY_BATCH", "cannot seal a block with no entries")
    if tip is not None and parent.block_hash != tip.block_hash:
        raise ChainError("STALE_PARENT", "parent is not the current chain tip")
    return build_block(
        parent.height + 1, parent.block_hash, seal_timestamp, pending, post_state_hash
    )


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------

HASH_MISMATCH = "HASH_MISMATCH"
LINK_BROKEN = "LINK_BROKEN"
STATE_MISMATCH = "STATE_MISMATCH"
BAD_HEIGHT = "BAD_HEIGHT"
DECODE_ERROR = "DECODE_ERROR"


@dataclass(frozen=True)
class ChainFault:
    height: int
    reason: str
    detail: str = ""


def verify_structure(blocks: list) -> Optional[ChainFault]:
    """Hash-recomputation, linkage, and height checks. None means OK."""
    if not blocks:
        raise ChainError("EMPTY_CHAIN", "no blocks to verify")
    for i, block in enumerate(blocks):
        if block.height != i:
            return ChainFault(i, BAD_HEIGHT, f"expected height {i}, found {block.height}")
        recomputed = compute_block_hash(block.body_json())
        if recomputed != block.block_hash:
            return ChainFault(i, HASH_MISMATCH, "stored blockHash does not match contents")
        expected_prev = ZERO_DIGEST if i == 0 else blocks[i - 1].block_hash
        if block.prev_hash != expected_prev:
            return ChainFault(i, LINK_BROKEN, "prevHash does not match parent blockHash")
    return None


def verify_chain(blocks: list, replay_state_hashes=None) -> Optional[ChainFault]:
    """Full chain verification. None means OK.

    ``replay_state_hashes`` is an optional callable taking the block list and
    yielding the recomputed per-height state hash; when given, the stateHash
    commitment of every block is checked against deterministic replay. The
    lowest offending height wins when both passes find faults.
    """
    structural = verify_structure(blocks)
    limit = structural.height if structural else len(blocks)
    if replay_state_hashes is not None and limit > 0:
        for height, digest in enumerate(replay_state_hashes(blocks[:limit])):
            if digest != blocks[height].state_hash:
                return ChainFault(height, STATE_MISMATCH, "stateHash does not match replay")
    return structural


# ---------------------------------------------------------------------------
# Historian
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HistorianRecord:
    """Audit view of one ledger entry; always derived, never stored."""

    tx_id: str
    tx_type: str
    submitter: str
    timestamp: int
    status: str
    error_code: Optional[str]
    affected_asset_ids: tuple
    height: int

    def to_json(self) -> dict:
        obj = {
            "txId": self.tx_id,
            "txType": self.tx_type,
            "submitter": self.submitter,
            "timestamp": self.timestamp,
            "status": self.status,
            "affectedAssetIds": list(self.affected_asset_ids),
            "height": self.height,
        }
        if self.error_code is not None:
            obj["errorCode"] = self.error_code
        return obj


def _affected_assets(envelope: TxEnvelope, result: TxResult) -> tuple:
    ids = set()
    asset_id = envelope.payload.get("assetId")
    if isinstance(asset_id, str):
        ids.add(asset_id)
    for event in result.events:
        if event.get("recordKind") == "Asset" and isinstance(event.get("recordId"), str):
            ids.add(event["recordId"])
    return tuple(sorted(ids))


def derive_historian(blocks: Iterable[Block]) -> list:
    records = []
    for block in blocks:
        for envelope, result in block.entries:
            records.append(
                HistorianRecord(
                    tx_id=envelope.tx_id,
                    tx_type=envelope.tx_type,
                    submitter=envelope.submitter,
                    timestamp=envelope.timestamp,
                    status=result.status,
                    error_code=result.error_code,
                    affected_asset_ids=_affected_assets(envelope, result),
                    height=block.height,
                )
            )
    return records


def historian_query(
    blocks: Iterable[Block],
    submitter: Optional[str] = None,
    asset_id: Optional[str] = None,
    tx_type: Optional[str] = None,
    height_range: Optional[tuple] = None,
) -> list:
    """All ledger entries matching every supplied filter, in commit order.

    Rejected entries are included: a denied view attempt is audit data.
    """
    records = []
    for rec in derive_historian(blocks):
        if submitter is not None and rec.submitter != submitter:
            continue
        if asset_id is not None and asset_id not in rec.affected_asset_ids:
            continue
        if tx_type is not None and rec.tx_type != tx_type:
            continue
        if height_range is not None:
            lo, hi = height_range
            if not (lo <= rec.height <= hi):
                continue
        records.append(rec)
    return records


# ---------------------------------------------------------------------------
# Persistence: length-prefixed canonical-JSON records, append-only
# ---------------------------------------------------------------------------

class BlockStore:
    """One append-only file; 4-byte big-endian length + canonical block JSON."""

    def __init__(self, path):
        self.path = Path(path)

    def exists(self) -> bool:
        return self.path.exists() and self.path.stat().st_size > 0

    def append(self, block: Block) -> None:
        record = canonical_dumps(block.to_json())
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "ab") as fh:
            fh.write(_LEN_PREFIX.pack(len(record)))
            fh.write(record)
            fh.flush()

    def load(self) -> list:
        """Read every block record; corruption raises ChainError(DECODE_ERROR)
        carrying the index of the first unreadable record."""
        blocks = []
        data = self.path.read_bytes()
        offset = 0
        index = 0
        while offset < len(data):
            if offset + _LEN_PREFIX.size > len(data):
                raise ChainError(DECODE_ERROR, "truncated length prefix", height=index)
            (length,) = _LEN_PREFIX.unpack_from(data, offset)
            offset += _LEN_PREFIX.size
            if offset + length > len(data):
                raise ChainError(DECODE_ERROR, "truncated block record", height=index)
            raw = data[offset : offset + length]
            offset += length
            try:
                blocks.append(Block.from_json(canonical_loads(raw)))
            except (ValueError, KeyError, TypeError, MalformedEnvelope) as exc:
                raise ChainError(DECODE_ERROR, f"unreadable block record: {exc}", height=index)
            index += 1
        return blocks


class Ledger:
    """In-memory chain plus its persisted mirror; single-writer appends."""

    def __init__(self, store: Optional[BlockStore] = None):
        self.store = store
        self.blocks: list = []
        self._tx_ids: set = set()

    @property
    def tip(self) -> Optional[Block]:
        return self.blocks[-1] if self.blocks else None

    @property
    def height(self) -> int:
        return len(self.blocks) - 1

    def has_tx(self, tx_id: str) -> bool:
        return tx_id in self._tx_ids

    def append(self, block: Block) -> None:
        if self.blocks:
            if block.prev_hash != self.tip.block_hash or block.height != self.tip.height + 1:
                raise ChainError("STALE_PARENT", "block does not extend the tip")
        elif block.height != 0 or block.prev_hash != ZERO_DIGEST:
            raise ChainError("BAD_GENESIS", "first block must be a genesis block")
        if self.store is not None:
            self.store.append(block)
        self._index(block)

    def _index(self, block: Block) -> None:
        self.blocks.append(block)
        for envelope, _ in block.entries:
            self._tx_ids.add(envelope.tx_id)

    @classmethod
    def load(cls, store: BlockStore) -> "Ledger":
        """Rebuild the in-memory index from disk; structural faults are fatal."""
        ledger = cls(store)
        blocks = store.load()
        fault = verify_structure(blocks) if blocks else None
        if fault is not None:
            raise ChainError(fault.reason, fault.detail, height=fault.height)
        for block in blocks:
            ledger._index(block)
        return ledger
