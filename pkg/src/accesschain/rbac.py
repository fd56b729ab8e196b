"""Role-based access control: org-scoped role bindings matched against
per-asset role lists.

A user may view an org asset exactly when they hold an ACTIVE role binding
in the owning organization whose role appears in the asset's viewerRoles or
editorRoles. Nothing is implicit: org admins administer bindings but gain no
view rights from admin status alone.
"""

from __future__ import annotations

from .errors import TxError
from .state import TxContext
from .ibac import require_asset, require_participant


def binding_id(org_id: str, user_id: str, role: str) -> str:
    return f"{org_id}:{user_id}:{role}"


def require_org(ctx: TxContext, org_id: str) -> dict:
    rec = ctx.get("Organization", org_id)
    if rec is None:
        raise TxError("UNKNOWN_ORG", f"organization {org_id} is not registered")
    return dict(rec.body)


def require_org_admin(ctx: TxContext, org_id: str) -> dict:
    org = require_org(ctx, org_id)
    if ctx.submitter not in org["adminIds"]:
        raise TxError("NOT_ORG_ADMIN", f"{ctx.submitter} does not administer {org_id}")
    return org


def active_roles(ctx: TxContext, org_id: str, user_id: str) -> set:
    roles = set()
    for rec in ctx.list_records("RoleBinding"):
        b = rec.body
        if b["orgId"] == org_id and b["userId"] == user_id and b["active"]:
            roles.add(b["role"])
    return roles


def holds_org_view(ctx: TxContext, asset_body: dict, user_id: str) -> bool:
    org_id = asset_body.get("ownerOrgId")
    if org_id is None:
        return False
    granted = set(asset_body.get("viewerRoles", [])) | set(asset_body.get("editorRoles", []))
    return bool(active_roles(ctx, org_id, user_id) & granted)


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def register_organization(ctx: TxContext, payload: dict):
    org_id = payload["orgId"]
    submitter = require_participant(ctx, ctx.submitter)
    if not submitter.get("networkAdmin"):
        raise TxError("NOT_AUTHORIZED", "only a network admin may register organizations")
    if ctx.exists("Organization", org_id):
        raise TxError("DUPLICATE_ORG", f"organization {org_id} already exists")
    admin_ids = payload["adminIds"]
    if not admin_ids:
        raise TxError("EMPTY_ADMINS", "an organization needs at least one admin")
    for user_id in admin_ids:
        require_participant(ctx, user_id)
    body = {
        "orgId": org_id,
        "name": payload["name"],
        "adminIds": sorted(set(admin_ids)),
        "createdAtHeight": ctx.height,
    }
    ctx.put("Organization", org_id, body)
    ctx.emit("created", "Organization", org_id)
    return None


def create_org_asset(ctx: TxContext, payload: dict):
    asset_id = payload["assetId"]
    require_participant(ctx, ctx.submitter)
    require_org_admin(ctx, payload["ownerOrgId"])
    if ctx.exists("Asset", asset_id):
        raise TxError("DUPLICATE_ASSET", f"asset {asset_id} already exists")
    body = {
        "assetId": asset_id,
        "datasetRef": payload["datasetRef"],
        "ownerOrgId": payload["ownerOrgId"],
        "viewerRoles": [],
        "editorRoles": [],
        "metadata": payload.get("metadata", {}),
        "createdAtHeight": ctx.height,
    }
    ctx.put("Asset", asset_id, body)
    ctx.emit("created", "Asset", asset_id)
    return None


def assign_role(ctx: TxContext, payload: dict):
    org_id, user_id, role = payload["orgId"], payload["userId"], payload["role"]
    if not role:
        raise TxError("INVALID_ROLE", "role must be a non-empty string")
    require_org_admin(ctx, org_id)
    require_participant(ctx, user_id)
    bid = binding_id(org_id, user_id, role)
    existing = ctx.get("RoleBinding", bid)
    body = {
        "bindingId": bid,
        "orgId": org_id,
        "userId": user_id,
        "role": role,
        "active": True,
    }
    ctx.put("RoleBinding", bid, body)
    ctx.emit("updated" if existing is not None else "created", "RoleBinding", bid)
    return {"bindingId": bid}


def revoke_role(ctx: TxContext, payload: dict):
    org_id, user_id, role = payload["orgId"], payload["userId"], payload["role"]
    require_org_admin(ctx, org_id)
    bid = binding_id(org_id, user_id, role)
    rec = ctx.get("RoleBinding", bid)
    if rec is None or not rec.body["active"]:
        raise TxError("UNKNOWN_BINDING", f"no active binding {bid}")
    body = dict(rec.body)
    body["active"] = False
    ctx.put("RoleBinding", bid, body)
    ctx.emit("updated", "RoleBinding", bid)
    return None


def set_asset_roles(ctx: TxContext, payload: dict):
    asset_id = payload["assetId"]
    asset = require_asset(ctx, asset_id)
    org_id = asset.get("ownerOrgId")
    if org_id is None:
        raise TxError("NOT_ORG_ASSET", f"asset {asset_id} is not organization-owned")
    require_org_admin(ctx, org_id)
    asset["viewerRoles"] = sorted(set(payload["viewerRoles"]))
    asset["editorRoles"] = sorted(set(payload["editorRoles"]))
    ctx.put("Asset", asset_id, asset)
    ctx.emit("updated", "Asset", asset_id)
    return None


def verify_access(ctx: TxContext, payload: dict):
    """Role-intersection probe; always accepted, the answer is the result."""
    asset_id = payload["assetId"]
    user_id = payload["userId"]
    rec = ctx.get("Asset", asset_id)
    allowed = rec is not None and holds_org_view(ctx, rec.body, user_id)
    ctx.emit("canView", "Asset", asset_id, value=allowed)
    return {"canView": allowed}


def view_org_asset(ctx: TxContext, payload: dict):
    asset_id = payload["assetId"]
    asset = require_asset(ctx, asset_id)
    if not holds_org_view(ctx, asset, ctx.submitter):
        raise TxError("ACCESS_DENIED", f"{ctx.submitter} may not view {asset_id}")
    ctx.emit("viewed", "Asset", asset_id)
    return {
        "assetId": asset["assetId"],
        "datasetRef": asset["datasetRef"],
        "metadata": asset["metadata"],
    }


PROCESSORS = {
    "RegisterOrganization": register_organization,
    "CreateOrgAsset": create_org_asset,
    "AssignRole": assign_role,
    "RevokeRole": revoke_role,
    "SetAssetRoles": set_asset_roles,
    "VerifyAccess": verify_access,
    "ViewOrgAsset": view_org_asset,
}
