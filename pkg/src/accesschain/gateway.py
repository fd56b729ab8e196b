"""HTTP edge: transaction submission, read-only queries, SMS webhook.

Mutations enter only through POST /api/tx (client-signed envelopes) or
POST /sms (text commands signed server-side with the phone's bound key).
Both funnel into the node's single commit path. GET endpoints never write.
"""

from __future__ import annotations

import logging
from typing import Optional
from xml.sax.saxutils import escape

from fastapi import FastAPI, Form, Request, Response
from fastapi.responses import JSONResponse

from .chain import ACCEPTED
from .identity import KeyError_, Keystore
from .node import Node, SubmitRejected

log = logging.getLogger(__name__)

SMS_MAX_BODY = 1600

TWIML = '<?xml version="1.0" encoding="UTF-8"?><Response><Message>{}</Message></Response>'


class SmsParseError(ValueError):
    code = "PARSE_ERROR"


def parse_sms_command(body: str) -> tuple:
    """Text command -> (txType, payload). Keywords are case-insensitive,
    ids verbatim. Raises SmsParseError on anything off-grammar."""
    if len(body) > SMS_MAX_BODY:
        raise SmsParseError("body exceeds 1600 characters")
    tokens = body.split()
    if not tokens:
        raise SmsParseError("empty command")
    keyword = tokens[0].upper()

    if keyword == "GIVE":
        # GIVE <assetId> VIEW u1[,u2...] [EDIT u3[,u4...]]
        if len(tokens) not in (4, 6) or tokens[2].upper() != "VIEW":
            raise SmsParseError("usage: GIVE <assetId> VIEW u1[,u2] [EDIT u3[,u4]]")
        editors: list = []
        if len(tokens) == 6:
            if tokens[4].upper() != "EDIT":
                raise SmsParseError("expected EDIT section")
            editors = tokens[5].split(",")
        return "GiveAccess", {
            "assetId": tokens[1],
            "viewers": tokens[3].split(","),
            "editors": editors,
        }
    if keyword == "REVOKE":
        if len(tokens) != 3:
            raise SmsParseError("usage: REVOKE <assetId> u1[,u2]")
        return "RevokeAccess", {"assetId": tokens[1], "users": tokens[2].split(",")}
    if keyword == "REQUEST":
        if len(tokens) != 3 or tokens[2].upper() not in ("VIEW", "EDIT"):
            raise SmsParseError("usage: REQUEST <assetId> VIEW|EDIT")
        return "RequestAccess", {"assetId": tokens[1], "level": tokens[2].upper()}
    if keyword == "CHECK":
        if len(tokens) != 3:
            raise SmsParseError("usage: CHECK <assetId> <userId>")
        return "CanView", {"assetId": tokens[1], "userId": tokens[2]}
    if keyword == "VIEW":
        if len(tokens) != 2:
            raise SmsParseError("usage: VIEW <assetId>")
        return "ViewAsset", {"assetId": tokens[1]}
    raise SmsParseError(f"unknown command {tokens[0]!r}")


def _twiml(text: str) -> Response:
    return Response(content=TWIML.format(escape(text)), media_type="text/xml")


def _success_text(tx_type: str, payload: dict, outcome: dict) -> str:
    asset_id = payload.get("assetId", "")
    text = f"OK {tx_type} {asset_id}".rstrip()
    result = outcome.get("result") or {}
    if tx_type == "CanView":
        text += f" {str(result.get('canView', False)).lower()}"
    elif tx_type == "ViewAsset":
        text += f" {result.get('datasetRef', '')}".rstrip()
    elif tx_type == "RequestAccess":
        text += f" {result.get('requestId', '')}".rstrip()
    return text


def create_app(node: Node, keystore: Optional[Keystore] = None, phone_bindings: Optional[dict] = None) -> FastAPI:
    app = FastAPI(title="accesschain gateway", docs_url=None, redoc_url=None)
    app.state.node = node
    bindings = phone_bindings or {}

    @app.post("/api/tx")
    async def submit_tx(request: Request):
        try:
            obj = await request.json()
        except Exception:
            return JSONResponse(
                status_code=400,
                content={"error": "MALFORMED_ENVELOPE", "message": "body is not JSON"},
            )
        return _submit(obj)

    def _submit(obj) -> JSONResponse:
        try:
            outcome = node.submit_json(obj)
        except SubmitRejected as exc:
            return JSONResponse(
                status_code=exc.http_status,
                content={"error": exc.code, "message": str(exc)},
            )
        status = 200 if outcome["status"] == ACCEPTED else 409
        return JSONResponse(status_code=status, content=outcome)

    @app.get("/api/assets/{asset_id}")
    def get_asset(asset_id: str):
        body = node.get_asset(asset_id)
        if body is None:
            return JSONResponse(status_code=404, content={"error": "NOT_FOUND"})
        return body

    @app.get("/api/historian")
    def get_historian(
        submitter: Optional[str] = None,
        assetId: Optional[str] = None,
        txType: Optional[str] = None,
        fromHeight: Optional[int] = None,
        toHeight: Optional[int] = None,
    ):
        height_range = None
        if fromHeight is not None or toHeight is not None:
            height_range = (
                fromHeight if fromHeight is not None else 0,
                toHeight if toHeight is not None else node.ledger.height,
            )
        records = node.historian(
            submitter=submitter, asset_id=assetId, tx_type=txType, height_range=height_range
        )
        return [rec.to_json() for rec in records]

    @app.get("/api/requests")
    def get_requests(
        ownerId: Optional[str] = None,
        assetId: Optional[str] = None,
        requesterId: Optional[str] = None,
        status: Optional[str] = None,
    ):
        return node.list_requests(
            owner_id=ownerId, asset_id=assetId, requester_id=requesterId, status=status
        )

    @app.get("/api/can-view")
    def get_can_view(assetId: str, userId: str):
        return {"assetId": assetId, "userId": userId, "canView": node.check_view(assetId, userId)}

    @app.get("/api/chain/verify")
    def get_chain_verify():
        fault = node.verify()
        body = {"ok": fault is None, "height": node.ledger.height}
        if fault is not None:
            body["fault"] = {"height": fault.height, "reason": fault.reason, "detail": fault.detail}
        return body

    @app.post("/sms")
    def handle_sms(sms_from: str = Form(alias="From"), sms_body: str = Form(alias="Body")):
        binding = bindings.get(sms_from)
        if binding is None:
            return _twiml("ERR UNKNOWN_PHONE")
        try:
            tx_type, payload = parse_sms_command(sms_body)
        except SmsParseError as exc:
            log.debug("sms parse failure from %s: %s", sms_from, exc)
            return _twiml("ERR PARSE_ERROR")
        if keystore is None:
            return _twiml("ERR UNKNOWN_CARD")
        try:
            key_file = keystore.load(binding.card_id)
        except KeyError_:
            return _twiml("ERR UNKNOWN_CARD")
        envelope = node.new_envelope(tx_type, payload, key_file)
        try:
            outcome = node.submit_envelope(envelope)
        except SubmitRejected as exc:
            return _twiml(f"ERR {exc.code}")
        if outcome["status"] != ACCEPTED:
            return _twiml(f"ERR {outcome.get('errorCode', 'REJECTED')}")
        return _twiml(_success_text(tx_type, payload, outcome))

    return app
