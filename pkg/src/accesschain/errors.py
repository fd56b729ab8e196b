"""Error types shared across the ledger stack.

Three failure surfaces, kept distinct on purpose:

* ``TxError`` — raised by a transaction processor. The submission is
  recorded on-chain as a REJECTED entry (denied attempts stay auditable)
  and never mutates world state.
* ``SubmitRejected`` codes — pre-chain failures (bad signature, schema
  violation, duplicate txId). These never reach the ledger at all: an
  unverifiable envelope cannot be attributed to a submitter, so recording
  it would pollute the audit trail and break the signed-entry invariant.
* ``ChainError`` / ``ModelError`` — structural failures of the chain or
  the network model, surfaced as exceptions to the operator.
"""

from __future__ import annotations


class TxError(Exception):
    """Processor-level rejection; recorded on-chain with this code."""

    def __init__(self, code: str, message: str = ""):
        super().__init__(message or code)
        self.code = code


class ChainError(Exception):
    def __init__(self, code: str, message: str = "", height: int | None = None):
        super().__init__(message or code)
        self.code = code
        self.height = height


class MalformedEnvelope(ValueError):
    """Submission body does not parse as a transaction envelope."""

    code = "MALFORMED_ENVELOPE"


# Pre-chain rejection codes returned by the engine without a ledger entry.
MALFORMED_ENVELOPE = "MALFORMED_ENVELOPE"
BAD_SIGNATURE = "BAD_SIGNATURE"
UNKNOWN_TX_TYPE = "UNKNOWN_TX_TYPE"
SCHEMA_VIOLATION = "SCHEMA_VIOLATION"
DUPLICATE_TX = "DUPLICATE_TX"
