"""Identity-based access control: per-user viewer/editor lists on assets.

Every operation runs inside a TxContext; raising TxError rejects the
transaction (recorded on-chain as REJECTED) without touching state.

ACL semantics:
  * the asset owner implicitly views and edits; owners never appear in the
    viewer or editor lists (grants naming the owner are dropped silently)
  * editors can also view
  * granting is additive and idempotent; lists stay sorted and deduplicated
"""

from __future__ import annotations

from .errors import TxError
from .state import TxContext

VIEW = "VIEW"
EDIT = "EDIT"

PENDING = "PENDING"
GRANTED = "GRANTED"
DENIED = "DENIED"
REVOKED = "REVOKED"


# ---------------------------------------------------------------------------
# Shared lookups
# ---------------------------------------------------------------------------

def require_participant(ctx: TxContext, participant_id: str) -> dict:
    rec = ctx.get("Participant", participant_id)
    if rec is None:
        raise TxError("UNKNOWN_PARTICIPANT", f"participant {participant_id} is not registered")
    return rec.body


def require_asset(ctx: TxContext, asset_id: str) -> dict:
    rec = ctx.get("Asset", asset_id)
    if rec is None:
        raise TxError("UNKNOWN_ASSET", f"asset {asset_id} does not exist")
    return dict(rec.body)


def merged_acl(base: list, grant: list, owner_id: str) -> list:
    return sorted((set(base) | set(grant)) - {owner_id})


def holds_view(asset_body: dict, user_id: str) -> bool:
    if asset_body.get("ownerId") == user_id:
        return True
    return user_id in asset_body.get("viewers", []) or user_id in asset_body.get("editors", [])


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def create_asset(ctx: TxContext, payload: dict):
    asset_id = payload["assetId"]
    require_participant(ctx, ctx.submitter)
    if ctx.exists("Asset", asset_id):
        raise TxError("DUPLICATE_ASSET", f"asset {asset_id} already exists")
    body = {
        "assetId": asset_id,
        "datasetRef": payload["datasetRef"],
        "ownerId": ctx.submitter,
        "viewers": [],
        "editors": [],
        "metadata": payload.get("metadata", {}),
        "createdAtHeight": ctx.height,
    }
    ctx.put("Asset", asset_id, body)
    ctx.emit("created", "Asset", asset_id)
    return None


def request_access(ctx: TxContext, payload: dict):
    asset_id = payload["assetId"]
    level = payload["level"]
    if level not in (VIEW, EDIT):
        raise TxError("INVALID_LEVEL", f"level must be VIEW or EDIT, got {level!r}")
    require_participant(ctx, ctx.submitter)
    asset = require_asset(ctx, asset_id)
    if asset["ownerId"] == ctx.submitter:
        raise TxError("OWNER_SELF_REQUEST", "owners already hold full access")
    for rec in ctx.list_records("AccessRequest"):
        b = rec.body
        if (
            b["assetId"] == asset_id
            and b["requesterId"] == ctx.submitter
            and b["level"] == level
            and b["status"] == PENDING
        ):
            raise TxError("DUPLICATE_PENDING", "an identical pending request already exists")
    request_id = ctx.tx_id
    body = {
        "requestId": request_id,
        "assetId": asset_id,
        "requesterId": ctx.submitter,
        "level": level,
        "status": PENDING,
        "createdAtHeight": ctx.height,
    }
    ctx.put("AccessRequest", request_id, body)
    ctx.emit("created", "AccessRequest", request_id)
    return {"requestId": request_id}


def give_access(ctx: TxContext, payload: dict):
    asset_id = payload["assetId"]
    asset = require_asset(ctx, asset_id)
    if asset["ownerId"] != ctx.submitter:
        raise TxError("NOT_OWNER", "only the asset owner may grant access")
    viewers = payload["viewers"]
    editors = payload["editors"]
    for user_id in viewers + editors:
        require_participant(ctx, user_id)

    request_id = payload.get("requestId")
    request = None
    if request_id is not None:
        rec = ctx.get("AccessRequest", request_id)
        if rec is None or rec.body["assetId"] != asset_id:
            raise TxError("UNKNOWN_REQUEST", f"no request {request_id} for this asset")
        # only a PENDING request flips; an already-resolved one stays put
        if rec.body["status"] == PENDING:
            request = dict(rec.body)

    asset["viewers"] = merged_acl(asset["viewers"], viewers, asset["ownerId"])
    asset["editors"] = merged_acl(asset["editors"], editors, asset["ownerId"])
    ctx.put("Asset", asset_id, asset)
    ctx.emit("updated", "Asset", asset_id)

    if request is not None:
        request["status"] = GRANTED
        ctx.put("AccessRequest", request_id, request)
        ctx.emit("updated", "AccessRequest", request_id)
    return None


def revoke_access(ctx: TxContext, payload: dict):
    asset_id = payload["assetId"]
    asset = require_asset(ctx, asset_id)
    if asset["ownerId"] != ctx.submitter:
        raise TxError("NOT_OWNER", "only the asset owner may revoke access")
    users = set(payload["users"])
    asset["viewers"] = sorted(set(asset["viewers"]) - users)
    asset["editors"] = sorted(set(asset["editors"]) - users)
    ctx.put("Asset", asset_id, asset)
    ctx.emit("updated", "Asset", asset_id)
    # A revoked user's GRANTED requests flip so the audit trail reads cleanly.
    for rec in ctx.list_records("AccessRequest"):
        b = rec.body
        if b["assetId"] == asset_id and b["requesterId"] in users and b["status"] == GRANTED:
            updated = dict(b)
            updated["status"] = REVOKED
            ctx.put("AccessRequest", b["requestId"], updated)
            ctx.emit("updated", "AccessRequest", b["requestId"])
    return None


def deny_request(ctx: TxContext, payload: dict):
    request_id = payload["requestId"]
    rec = ctx.get("AccessRequest", request_id)
    if rec is None:
        raise TxError("UNKNOWN_REQUEST", f"request {request_id} does not exist")
    request = dict(rec.body)
    asset = require_asset(ctx, request["assetId"])
    if asset["ownerId"] != ctx.submitter:
        raise TxError("NOT_OWNER", "only the asset owner may deny a request")
    if request["status"] != PENDING:
        raise TxError("REQUEST_NOT_PENDING", f"request is {request['status']}, not PENDING")
    request["status"] = DENIED
    ctx.put("AccessRequest", request_id, request)
    ctx.emit("updated", "AccessRequest", request_id)
    ctx.emit("requestDenied", "Asset", request["assetId"])
    return None


def can_view(ctx: TxContext, payload: dict):
    """Permission probe; always accepted, the answer is the result."""
    asset_id = payload["assetId"]
    user_id = payload["userId"]
    rec = ctx.get("Asset", asset_id)
    allowed = rec is not None and holds_view(rec.body, user_id)
    ctx.emit("canView", "Asset", asset_id, value=allowed)
    return {"canView": allowed}


def view_asset(ctx: TxContext, payload: dict):
    asset_id = payload["assetId"]
    asset = require_asset(ctx, asset_id)
    if not holds_view(asset, ctx.submitter):
        raise TxError("ACCESS_DENIED", f"{ctx.submitter} may not view {asset_id}")
    ctx.emit("viewed", "Asset", asset_id)
    return {
        "assetId": asset["assetId"],
        "datasetRef": asset["datasetRef"],
        "metadata": asset["metadata"],
    }


PROCESSORS = {
    "CreateAsset": create_asset,
    "RequestAccess": request_access,
    "GiveAccess": give_access,
    "RevokeAccess": revoke_access,
    "DenyRequest": deny_request,
    "CanView": can_view,
    "ViewAsset": view_asset,
}
