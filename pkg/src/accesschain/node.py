"""Single-writer node: validates, executes, and commits signed transactions.

Submission pipeline:

  1. pre-chain gates: envelope shape, duplicate txId, declared txType,
     payload schema, and (at execution time) the Ed25519 signature against
     the submitter's ACTIVE identity card. Failing any gate rejects the
     submission without recording it on-chain.
  2. execution: the matching processor runs in a staged TxContext. A
     processor TxError is recorded on-chain as REJECTED (auditable, no state
     change); success is recorded as ACCEPTED and its writes commit.
  3. group commit: queued submissions seal into one block per batch (at most
     MAX_BATCH entries) under a single commit lock.

The very first block is the bootstrap genesis: it registers the node admin
and issues their identity card, so its entries cannot be checked against a
pre-existing card and are exempt from the live signature gate. They are
still ordinary signed envelopes and replay identically.
"""

from __future__ import annotations

import logging
import threading
import time
import uuid
from collections import deque
from concurrent.futures import Future
from pathlib import Path
from typing import Callable, Optional

from . import directory, ibac, rbac
from .chain import (
    ACCEPTED,
    MAX_BATCH,
    REJECTED,
    BlockStore,
    ChainFault,
    Ledger,
    TxEnvelope,
    TxResult,
    build_block,
    historian_query,
    make_genesis,
    verify_chain,
)
from .errors import (
    BAD_SIGNATURE,
    DUPLICATE_TX,
    MALFORMED_ENVELOPE,
    SCHEMA_VIOLATION,
    UNKNOWN_TX_TYPE,
    ChainError,
    MalformedEnvelope,
    TxError,
)
from .identity import KeyFile, KeyPair, make_envelope, verify_envelope
from .netdef import ModelError, NetworkModel
from .state import TxContext, WorldState

log = logging.getLogger(__name__)

PROCESSORS = {**directory.PROCESSORS, **ibac.PROCESSORS, **rbac.PROCESSORS}

_HTTP_STATUS = {
    MALFORMED_ENVELOPE: 400,
    BAD_SIGNATURE: 401,
    DUPLICATE_TX: 409,
    UNKNOWN_TX_TYPE: 422,
    SCHEMA_VIOLATION: 422,
}


class SubmitRejected(Exception):
    """Pre-chain rejection: the submission never reached the ledger."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.http_status = _HTTP_STATUS.get(code, 400)


def default_clock() -> int:
    return time.time_ns() // 1_000_000


def replay_state_hashes(blocks):
    """Recompute per-block state hashes by re-running ACCEPTED entries.

    Rejected entries are skipped: they never changed state. An ACCEPTED
    entry that no longer executes cleanly yields an impossible digest so
    the caller reports the mismatch at that height.
    """
    state = WorldState()
    for block in blocks:
        ok = True
        for envelope, result in block.entries:
            if result.status != ACCEPTED:
                continue
            processor = PROCESSORS.get(envelope.tx_type)
            if processor is None:
                ok = False
                break
            ctx = TxContext(
                state, block.height, envelope.tx_id, envelope.timestamp, envelope.submitter
            )
            try:
                processor(ctx, envelope.payload)
            except TxError:
                ok = False
                break
            ctx.commit()
        yield state.state_hash() if ok else "!" * 64


class Node:
    """One ledger, one world state, one committer."""

    def __init__(
        self,
        model: NetworkModel,
        store: Optional[BlockStore] = None,
        clock: Callable[[], int] = default_clock,
        tx_id_factory: Callable[[], str] = lambda: str(uuid.uuid4()),
    ):
        self.model = model
        self.clock = clock
        self.tx_id_factory = tx_id_factory
        self.ledger = Ledger(store)
        self.state = WorldState()
        self._queue: deque = deque()
        self._queue_lock = threading.Lock()
        self._commit_lock = threading.Lock()
        self._pending_ids: set = set()

    # -- construction --------------------------------------------------------

    @classmethod
    def bootstrap(
        cls,
        model: NetworkModel,
        store: Optional[BlockStore],
        admin_id: str,
        admin_display_name: str,
        *,
        key_pair: Optional[KeyPair] = None,
        clock: Callable[[], int] = default_clock,
        tx_id_factory: Callable[[], str] = lambda: str(uuid.uuid4()),
    ) -> tuple:
        """Fresh network: genesis block with the admin and their card.

        Returns (node, key_file); the caller persists the key file.
        """
        node = cls(model, store, clock=clock, tx_id_factory=tx_id_factory)
        pair = key_pair if key_pair is not None else KeyPair.generate()
        now = clock()
        register = make_envelope(
            "RegisterParticipant",
            {"participantId": admin_id, "displayName": admin_display_name},
            admin_id,
            now,
            pair.secret_key,
            tx_id=tx_id_factory(),
        )
        issue_id = tx_id_factory()
        card_id = f"card-{issue_id}"
        issue = make_envelope(
            "IssueIdentity",
            {"participantId": admin_id, "cardId": card_id, "publicKey": pair.public_key},
            admin_id,
            now,
            pair.secret_key,
            tx_id=issue_id,
        )
        working = node.state.copy()
        entries = []
        for envelope in (register, issue):
            node._gate_static(envelope.to_json())
            result = node._execute(working, envelope, height=0)
            if result.status != ACCEPTED:
                raise ChainError("BAD_GENESIS", f"bootstrap rejected: {result.error_code}")
            entries.append((envelope, result))
        block = make_genesis(entries, working.state_hash(), now)
        node.ledger.append(block)
        node.state = working
        key_file = KeyFile(
            card_id=card_id,
            participant_id=admin_id,
            public_key=pair.public_key,
            secret_key=pair.secret_key,
        )
        log.info("bootstrapped network, admin=%s card=%s", admin_id, card_id)
        return node, key_file

    @classmethod
    def open(
        cls,
        model: NetworkModel,
        store: BlockStore,
        clock: Callable[[], int] = default_clock,
        tx_id_factory: Callable[[], str] = lambda: str(uuid.uuid4()),
    ) -> "Node":
        """Load an existing chain; full verification plus state replay."""
        node = cls(model, store, clock=clock, tx_id_factory=tx_id_factory)
        node.ledger = Ledger.load(store)
        for height, digest in enumerate(replay_state_hashes(node.ledger.blocks)):
            expected = node.ledger.blocks[height].state_hash
            if digest != expected:
                raise ChainError(
                    "STATE_MISMATCH", "stored stateHash does not match replay", height=height
                )
        # replay once more onto the live state (generator above used its own)
        state = WorldState()
        for block in node.ledger.blocks:
            for envelope, result in block.entries:
                if result.status != ACCEPTED:
                    continue
                ctx = TxContext(
                    state, block.height, envelope.tx_id, envelope.timestamp, envelope.submitter
                )
                PROCESSORS[envelope.tx_type](ctx, envelope.payload)
                ctx.commit()
        node.state = state
        log.info("opened chain at height %d", node.ledger.height)
        return node

    # -- submission ------------------------------------------------------------

    def submit_json(self, obj) -> dict:
        """Validate, queue, and commit one submission; blocks until sealed.

        Raises SubmitRejected for pre-chain failures; returns the recorded
        outcome (ACCEPTED or processor-REJECTED) otherwise.
        """
        envelope = self._gate_static(obj)
        fut: Future = Future()
        with self._queue_lock:
            if envelope.tx_id in self._pending_ids or self.ledger.has_tx(envelope.tx_id):
                raise SubmitRejected(DUPLICATE_TX, f"txId {envelope.tx_id} was already submitted")
            self._pending_ids.add(envelope.tx_id)
            self._queue.append((envelope, fut))
        self._drain()
        outcome = fut.result()
        if isinstance(outcome, SubmitRejected):
            raise outcome
        return outcome

    def submit_envelope(self, envelope: TxEnvelope) -> dict:
        return self.submit_json(envelope.to_json())

    def new_envelope(self, tx_type: str, payload: dict, key_file: KeyFile) -> TxEnvelope:
        return make_envelope(
            tx_type,
            payload,
            key_file.participant_id,
            self.clock(),
            key_file.secret_key,
            tx_id=self.tx_id_factory(),
        )

    def _gate_static(self, obj) -> TxEnvelope:
        try:
            envelope = TxEnvelope.from_json(obj)
        except MalformedEnvelope as exc:
            raise SubmitRejected(MALFORMED_ENVELOPE, str(exc)) from None
        if not self.model.has_transaction(envelope.tx_type):
            raise SubmitRejected(UNKNOWN_TX_TYPE, f"undeclared txType {envelope.tx_type}")
        try:
            violations = self.model.validate_payload(envelope.tx_type, envelope.payload)
        except ModelError as exc:
            raise SubmitRejected(UNKNOWN_TX_TYPE, str(exc)) from None
        if violations:
            detail = "; ".join(f"{v.field}: {v.reason}" for v in violations)
            raise SubmitRejected(SCHEMA_VIOLATION, f"{envelope.tx_type}: {detail}")
        return envelope

    def _drain(self) -> None:
        while True:
            with self._commit_lock:
                with self._queue_lock:
                    batch = []
                    while self._queue and len(batch) < MAX_BATCH:
                        batch.append(self._queue.popleft())
                if not batch:
                    return
                self._commit_batch(batch)

    def _commit_batch(self, batch: list) -> None:
        working = self.state.copy()
        height = self.ledger.height + 1
        recorded: list = []
        outcomes: list = []
        for envelope, fut in batch:
            card = directory.active_card_for(working, envelope.submitter)
            good_sig = card is not None and verify_envelope(envelope, card.body)
            if not good_sig:
                with self._queue_lock:
                    self._pending_ids.discard(envelope.tx_id)
                outcomes.append(
                    (fut, SubmitRejected(BAD_SIGNATURE, "no active card verifies this envelope"))
                )
                continue
            result = self._execute(working, envelope, height)
            recorded.append((envelope, result))
            outcomes.append((fut, {"txId": envelope.tx_id, "height": height, **result.to_json()}))
        if recorded:
            block = build_block(
                height,
                self.ledger.tip.block_hash,
                self.clock(),
                recorded,
                working.state_hash(),
            )
            self.ledger.append(block)
            self.state = working
            with self._queue_lock:
                for envelope, _ in recorded:
                    self._pending_ids.discard(envelope.tx_id)
        for fut, outcome in outcomes:
            fut.set_result(outcome)

    def _execute(self, working: WorldState, envelope: TxEnvelope, height: int) -> TxResult:
        processor = PROCESSORS.get(envelope.tx_type)
        if processor is None:
            return TxResult(status=REJECTED, error_code=UNKNOWN_TX_TYPE)
        ctx = TxContext(working, height, envelope.tx_id, envelope.timestamp, envelope.submitter)
        try:
            value = processor(ctx, envelope.payload)
        except TxError as exc:
            log.debug("tx %s rejected: %s %s", envelope.tx_id, exc.code, exc)
            return TxResult(status=REJECTED, error_code=exc.code)
        ctx.commit()
        return TxResult(status=ACCEPTED, events=tuple(ctx.events), result=value)

    # -- queries ---------------------------------------------------------------

    def get_asset(self, asset_id: str) -> Optional[dict]:
        rec = self.state.get("Asset", asset_id)
        return dict(rec.body) if rec is not None else None

    def check_view(self, asset_id: str, user_id: str) -> bool:
        """Read-only permission probe across both ACL styles."""
        rec = self.state.get("Asset", asset_id)
        if rec is None:
            return False
        if "ownerId" in rec.body:
            return ibac.holds_view(rec.body, user_id)
        ctx = TxContext(self.state, self.ledger.height, "", 0, user_id)
        return rbac.holds_org_view(ctx, rec.body, user_id)

    def list_requests(
        self,
        owner_id: Optional[str] = None,
        asset_id: Optional[str] = None,
        requester_id: Optional[str] = None,
        status: Optional[str] = None,
    ) -> list:
        """Access requests in creation order, optionally filtered. The
        owner filter keeps only requests on assets owned by that participant."""
        out = []
        for rec in self.state.list_records("AccessRequest"):
            body = rec.body
            if asset_id is not None and body["assetId"] != asset_id:
                continue
            if requester_id is not None and body["requesterId"] != requester_id:
                continue
            if status is not None and body["status"] != status:
                continue
            if owner_id is not None:
                asset = self.state.get("Asset", body["assetId"])
                if asset is None or asset.body.get("ownerId") != owner_id:
                    continue
            out.append(dict(body))
        out.sort(key=lambda b: (b["createdAtHeight"], b["requestId"]))
        return out

    def historian(
        self,
        submitter: Optional[str] = None,
        asset_id: Optional[str] = None,
        tx_type: Optional[str] = None,
        height_range: Optional[tuple] = None,
    ) -> list:
        return historian_query(
            self.ledger.blocks,
            submitter=submitter,
            asset_id=asset_id,
            tx_type=tx_type,
            height_range=height_range,
        )

    def verify(self) -> Optional[ChainFault]:
        return verify_chain(self.ledger.blocks, replay_state_hashes)
