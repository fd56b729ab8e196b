"""Ed25519 identities: keypairs, card-signed envelopes, key files.

Keys travel as base64-encoded raw 32-byte values. A participant proves
authorship of a transaction by signing the canonical envelope body with the
secret key of an ACTIVE identity card registered on-chain for that
participant.
"""

from __future__ import annotations

import base64
import json
import uuid
from dataclasses import dataclass
from pathlib import Path

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives.asymmetric.ed25519 import (
    Ed25519PrivateKey,
    Ed25519PublicKey,
)

from .chain import TxEnvelope


class KeyError_(Exception):
    """Key material problems; .code is machine-readable."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class KeyPair:
    public_key: str  # base64 raw 32 bytes
    secret_key: str  # base64 raw 32 bytes

    @classmethod
    def generate(cls) -> "KeyPair":
        secret = Ed25519PrivateKey.generate()
        return cls._from_private(secret)

    @classmethod
    def from_seed(cls, seed: bytes) -> "KeyPair":
        """Deterministic pair from a 32-byte seed; tests and fixtures only."""
        if len(seed) != 32:
            raise KeyError_("BAD_SEED", "seed must be exactly 32 bytes")
        return cls._from_private(Ed25519PrivateKey.from_private_bytes(seed))

    @classmethod
    def _from_private(cls, secret: Ed25519PrivateKey) -> "KeyPair":
        from cryptography.hazmat.primitives.serialization import (
            Encoding,
            NoEncryption,
            PrivateFormat,
            PublicFormat,
        )

        raw_secret = secret.private_bytes(Encoding.Raw, PrivateFormat.Raw, NoEncryption())
        raw_public = secret.public_key().public_bytes(Encoding.Raw, PublicFormat.Raw)
        return cls(
            public_key=base64.b64encode(raw_public).decode("ascii"),
            secret_key=base64.b64encode(raw_secret).decode("ascii"),
        )


def _decode_key(b64: str, expect: int, what: str) -> bytes:
    try:
        raw = base64.b64decode(b64, validate=True)
    except Exception:
        raise KeyError_("BAD_KEY_ENCODING", f"{what} is not valid base64") from None
    if len(raw) != expect:
        raise KeyError_("BAD_KEY_LENGTH", f"{what} must decode to {expect} bytes")
    return raw


def sign_bytes(secret_key_b64: str, message: bytes) -> str:
    raw = _decode_key(secret_key_b64, 32, "secret key")
    signature = Ed25519PrivateKey.from_private_bytes(raw).sign(message)
    return base64.b64encode(signature).decode("ascii")


def verify_bytes(public_key_b64: str, message: bytes, signature_b64: str) -> bool:
    try:
        raw_key = _decode_key(public_key_b64, 32, "public key")
        raw_sig = base64.b64decode(signature_b64, validate=True)
    except (KeyError_, Exception):
        return False
    if len(raw_sig) != 64:
        return False
    try:
        Ed25519PublicKey.from_public_bytes(raw_key).verify(raw_sig, message)
        return True
    except InvalidSignature:
        return False


def verify_envelope(envelope: TxEnvelope, card_body: dict) -> bool:
    """True iff the signature checks out under the card's key AND the card
    is ACTIVE AND it belongs to the envelope's submitter. Every failure
    mode returns False; callers map False to a BAD_SIGNATURE rejection."""
    if card_body.get("status") != "ACTIVE":
        return False
    if card_body.get("participantId") != envelope.submitter:
        return False
    return verify_bytes(card_body["publicKey"], envelope.signing_bytes(), envelope.signature)


def sign_envelope(envelope: TxEnvelope, secret_key_b64: str) -> TxEnvelope:
    signature = sign_bytes(secret_key_b64, envelope.signing_bytes())
    return TxEnvelope(
        tx_id=envelope.tx_id,
        tx_type=envelope.tx_type,
        payload=envelope.payload,
        submitter=envelope.submitter,
        timestamp=envelope.timestamp,
        signature=signature,
    )


def make_envelope(
    tx_type: str,
    payload: dict,
    submitter: str,
    timestamp: int,
    secret_key_b64: str,
    tx_id: str | None = None,
) -> TxEnvelope:
    envelope = TxEnvelope(
        tx_id=tx_id if tx_id is not None else str(uuid.uuid4()),
        tx_type=tx_type,
        payload=payload,
        submitter=submitter,
        timestamp=timestamp,
        signature="",
    )
    return sign_envelope(envelope, secret_key_b64)


# ---------------------------------------------------------------------------
# Key files
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KeyFile:
    """On-disk credential: card binding plus the raw keypair."""

    card_id: str
    participant_id: str
    public_key: str
    secret_key: str

    def to_json(self) -> dict:
        return {
            "cardId": self.card_id,
            "participantId": self.participant_id,
            "publicKey": self.public_key,
            "secretKey": self.secret_key,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "KeyFile":
        return cls(
            card_id=obj["cardId"],
            participant_id=obj["participantId"],
            public_key=obj["publicKey"],
            secret_key=obj["secretKey"],
        )


class Keystore:
    """Directory of <cardId>.json key files."""

    def __init__(self, directory):
        self.directory = Path(directory)

    def save(self, key_file: KeyFile) -> Path:
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.directory / f"{key_file.card_id}.json"
        path.write_text(json.dumps(key_file.to_json(), indent=2) + "\n", encoding="utf-8")
        return path

    def load(self, card_id: str) -> KeyFile:
        path = self.directory / f"{card_id}.json"
        if not path.exists():
            raise KeyError_("UNKNOWN_CARD", f"no key file for card {card_id}")
        return KeyFile.from_json(json.loads(path.read_text(encoding="utf-8")))

    def load_for_participant(self, participant_id: str) -> KeyFile:
        """Newest key file whose participantId matches, by mtime."""
        if not self.directory.exists():
            raise KeyError_("UNKNOWN_PARTICIPANT", f"no key files in {self.directory}")
        candidates = []
        for path in self.directory.glob("*.json"):
            try:
                kf = KeyFile.from_json(json.loads(path.read_text(encoding="utf-8")))
            except (ValueError, KeyError):
                continue
            if kf.participant_id == participant_id:
                candidates.append((path.stat().st_mtime_ns, kf))
        if not candidates:
            raise KeyError_(
                "UNKNOWN_PARTICIPANT", f"no key file for participant {participant_id}"
            )
        return max(candidates, key=lambda pair: pair[0])[1]
