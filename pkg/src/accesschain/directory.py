"""Participant registry and identity-card lifecycle.

The very first RegisterParticipant bootstraps the network: it needs no prior
authority and the participant becomes the network admin. Every later
registration and third-party card issuance requires a network admin.

A participant holds at most one ACTIVE identity card; issuing a new card
revokes the previous one in the same transaction.
"""

from __future__ import annotations

from typing import Optional

from .errors import TxError
from .state import StateRecord, TxContext

ACTIVE = "ACTIVE"
REVOKED = "REVOKED"


def is_network_admin(ctx: TxContext, participant_id: str) -> bool:
    rec = ctx.get("Participant", participant_id)
    return rec is not None and bool(rec.body.get("networkAdmin"))


def active_card_for(state, participant_id: str) -> Optional[StateRecord]:
    """Works over WorldState and TxContext alike (both expose list_records)."""
    for rec in state.list_records("IdentityCard"):
        if rec.body["participantId"] == participant_id and rec.body["status"] == ACTIVE:
            return rec
    return None


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def register_participant(ctx: TxContext, payload: dict):
    participant_id = payload["participantId"]
    if ctx.exists("Participant", participant_id):
        raise TxError("DUPLICATE_PARTICIPANT", f"participant {participant_id} already exists")
    first = not ctx.list_records("Participant")
    if not first and not is_network_admin(ctx, ctx.submitter):
        raise TxError("NOT_AUTHORIZED", "only a network admin may register participants")
    body = {
        "participantId": participant_id,
        "displayName": payload["displayName"],
        "networkAdmin": first,
        "registeredAtHeight": ctx.height,
    }
    if "orgId" in payload:
        body["orgId"] = payload["orgId"]
    ctx.put("Participant", participant_id, body)
    ctx.emit("created", "Participant", participant_id)
    return None


def issue_identity(ctx: TxContext, payload: dict):
    participant_id = payload["participantId"]
    card_id = payload["cardId"]
    if not ctx.exists("Participant", participant_id):
        raise TxError("UNKNOWN_PARTICIPANT", f"participant {participant_id} is not registered")
    if ctx.submitter != participant_id and not is_network_admin(ctx, ctx.submitter):
        raise TxError("NOT_AUTHORIZED", "only the holder or a network admin may issue a card")
    if ctx.exists("IdentityCard", card_id):
        raise TxError("DUPLICATE_CARD", f"card {card_id} already exists")
    prior = active_card_for(ctx, participant_id)
    if prior is not None:
        body = dict(prior.body)
        body["status"] = REVOKED
        ctx.put("IdentityCard", prior.record_id, body)
        ctx.emit("updated", "IdentityCard", prior.record_id)
    ctx.put(
        "IdentityCard",
        card_id,
        {
            "cardId": card_id,
            "participantId": participant_id,
            "publicKey": payload["publicKey"],
            "status": ACTIVE,
            "issuedAtHeight": ctx.height,
        },
    )
    ctx.emit("created", "IdentityCard", card_id)
    return {"cardId": card_id}


def revoke_identity(ctx: TxContext, payload: dict):
    card_id = payload["cardId"]
    rec = ctx.get("IdentityCard", card_id)
    if rec is None:
        raise TxError("UNKNOWN_CARD", f"card {card_id} does not exist")
    body = dict(rec.body)
    if ctx.submitter != body["participantId"] and not is_network_admin(ctx, ctx.submitter):
        raise TxError("NOT_AUTHORIZED", "only the holder or a network admin may revoke a card")
    if body["status"] != ACTIVE:
        raise TxError("ALREADY_REVOKED", f"card {card_id} is already revoked")
    body["status"] = REVOKED
    ctx.put("IdentityCard", card_id, body)
    ctx.emit("updated", "IdentityCard", card_id)
    return None


PROCESSORS = {
    "RegisterParticipant": register_participant,
    "IssueIdentity": issue_identity,
    "RevokeIdentity": revoke_identity,
}
