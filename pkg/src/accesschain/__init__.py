"""Permissioned-ledger access control for external datasets.

Signed transaction envelopes commit into an append-only hash chain; world
state is a deterministic function of the accepted entries. Two ACL styles
ship in the box: per-user viewer/editor lists and org-scoped role bindings.
An HTTP gateway exposes submission, queries, and an SMS command webhook.
"""

from __future__ import annotations

from .canonical import canonical_dumps, canonical_loads, hash_canonical, sha256_hex
from .chain import (
    ACCEPTED,
    REJECTED,
    Block,
    BlockStore,
    ChainFault,
    HistorianRecord,
    Ledger,
    TxEnvelope,
    TxResult,
    historian_query,
    verify_chain,
)
from .errors import ChainError, MalformedEnvelope, TxError
from .identity import (
    KeyFile,
    KeyPair,
    Keystore,
    make_envelope,
    sign_envelope,
    verify_envelope,
)
from .netdef import ModelError, NetworkModel, Violation, load_models, parse_model, render_model
from .node import Node, SubmitRejected, replay_state_hashes
from .state import StateRecord, TxContext, WorldState

__version__ = "0.1.0"

__all__ = [
    "ACCEPTED",
    "REJECTED",
    "Block",
    "BlockStore",
    "ChainError",
    "ChainFault",
    "HistorianRecord",
    "KeyFile",
    "KeyPair",
    "Keystore",
    "Ledger",
    "MalformedEnvelope",
    "ModelError",
    "NetworkModel",
    "Node",
    "StateRecord",
    "SubmitRejected",
    "TxContext",
    "TxEnvelope",
    "TxError",
    "TxResult",
    "Violation",
    "WorldState",
    "canonical_dumps",
    "canonical_loads",
    "hash_canonical",
    "historian_query",
    "load_models",
    "make_envelope",
    "parse_model",
    "render_model",
    "replay_state_hashes",
    "sha256_hex",
    "sign_envelope",
    "verify_chain",
    "verify_envelope",
]
