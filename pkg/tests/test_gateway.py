from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from accesschain import KeyPair, Keystore
from accesschain.config import PhoneBinding
from accesschain.gateway import SMS_MAX_BODY, create_app, parse_sms_command, SmsParseError
from accesschain.identity import make_envelope

from conftest import Net

PHONE_P1 = "+15550001"
PHONE_P2 = "+15550002"


@pytest.fixture
def gw(model, tmp_path):
    net = Net(model)
    keystore = Keystore(tmp_path / "keys")
    bindings = {}
    for phone, pid in ((PHONE_P1, "p1"), (PHONE_P2, "p2")):
        key = net.add_user(pid)
        keystore.save(key)
        bindings[phone] = PhoneBinding(phone=phone, participant_id=pid, card_id=key.card_id)
    bindings["+15550009"] = PhoneBinding(
        phone="+15550009", participant_id="ghost", card_id="card-ghost"
    )
    net.tx("p1", "CreateAsset", {"assetId": "a1", "datasetRef": "ds-001"})
    client = TestClient(create_app(net.node, keystore=keystore, phone_bindings=bindings))
    return net, client


def post_tx(net: Net, client: TestClient, pid: str, tx_type: str, payload: dict):
    env = net.node.new_envelope(tx_type, payload, net.keys[pid])
    return client.post("/api/tx", json=env.to_json())


def sms(client: TestClient, phone: str, body: str):
    return client.post("/sms", data={"From": phone, "Body": body})


def sms_text(resp) -> str:
    assert resp.status_code == 200
    assert resp.headers["content-type"].startswith("text/xml")
    body = resp.text
    prefix = '<?xml version="1.0" encoding="UTF-8"?><Response><Message>'
    suffix = "</Message></Response>"
    assert body.startswith(prefix) and body.endswith(suffix)
    assert len(body) <= SMS_MAX_BODY
    return body[len(prefix) : -len(suffix)]


# ---------------------------------------------------------------------------
# POST /api/tx
# ---------------------------------------------------------------------------

def test_submit_accepted(gw):
    net, client = gw
    resp = post_tx(net, client, "p1", "GiveAccess", {"assetId": "a1", "viewers": ["p2"], "editors": []})
    assert resp.status_code == 200
    out = resp.json()
    assert out["status"] == "ACCEPTED"
    assert out["height"] == net.node.ledger.height
    assert any(ev["recordId"] == "a1" for ev in out["events"])


def test_submit_processor_rejection_is_409(gw):
    net, client = gw
    resp = post_tx(net, client, "p2", "GiveAccess", {"assetId": "a1", "viewers": ["p2"], "editors": []})
    assert resp.status_code == 409
    out = resp.json()
    assert out["status"] == "REJECTED"
    assert out["errorCode"] == "NOT_OWNER"
    # recorded on-chain despite rejection
    assert any(r.tx_id == out["txId"] for r in net.node.historian())


def test_submit_not_json(gw):
    _, client = gw
    resp = client.post("/api/tx", content=b"\x00garbage", headers={"content-type": "application/json"})
    assert resp.status_code == 400
    assert resp.json()["error"] == "MALFORMED_ENVELOPE"


def test_submit_missing_fields(gw):
    _, client = gw
    resp = client.post("/api/tx", json={"txType": "CreateAsset"})
    assert resp.status_code == 400
    assert resp.json()["error"] == "MALFORMED_ENVELOPE"


def test_submit_bad_signature_is_401(gw):
    net, client = gw
    rogue = KeyPair.generate()
    env = make_envelope("ViewAsset", {"assetId": "a1"}, "p1", 5, rogue.secret_key)
    resp = client.post("/api/tx", json=env.to_json())
    assert resp.status_code == 401
    assert resp.json()["error"] == "BAD_SIGNATURE"


def test_submit_unknown_type_is_422(gw):
    net, client = gw
    env = net.node.new_envelope("ViewAsset", {"assetId": "a1"}, net.keys["p1"])
    obj = env.to_json()
    obj["txType"] = "Nonsense"
    resp = client.post("/api/tx", json=obj)
    assert resp.status_code == 422
    assert resp.json()["error"] == "UNKNOWN_TX_TYPE"


def test_submit_schema_violation_is_422(gw):
    net, client = gw
    resp = post_tx(net, client, "p1", "CreateAsset", {"assetId": "a2"})
    assert resp.status_code == 422
    assert resp.json()["error"] == "SCHEMA_VIOLATION"


def test_submit_duplicate_is_409_and_unrecorded(gw):
    net, client = gw
    env = net.node.new_envelope("CanView", {"assetId": "a1", "userId": "p2"}, net.keys["p1"])
    assert client.post("/api/tx", json=env.to_json()).status_code == 200
    height = net.node.ledger.height
    resp = client.post("/api/tx", json=env.to_json())
    assert resp.status_code == 409
    assert resp.json()["error"] == "DUPLICATE_TX"
    assert net.node.ledger.height == height


# ---------------------------------------------------------------------------
# Read-only endpoints
# ---------------------------------------------------------------------------

def test_get_asset(gw):
    net, client = gw
    resp = client.get("/api/assets/a1")
    assert resp.status_code == 200
    body = resp.json()
    assert body["assetId"] == "a1"
    assert body["ownerId"] == "p1"
    assert body["viewers"] == [] and body["editors"] == []


def test_get_asset_missing(gw):
    _, client = gw
    resp = client.get("/api/assets/nope")
    assert resp.status_code == 404
    assert resp.json() == {"error": "NOT_FOUND"}


def test_historian_filters(gw):
    net, client = gw
    post_tx(net, client, "p1", "GiveAccess", {"assetId": "a1", "viewers": ["p2"], "editors": []})
    post_tx(net, client, "p2", "ViewAsset", {"assetId": "a1"})

    records = client.get("/api/historian", params={"assetId": "a1"}).json()
    assert [r["txType"] for r in records] == ["CreateAsset", "GiveAccess", "ViewAsset"]

    records = client.get("/api/historian", params={"submitter": "p2"}).json()
    assert {r["submitter"] for r in records} == {"p2"}

    records = client.get("/api/historian", params={"txType": "GiveAccess"}).json()
    assert len(records) == 1 and records[0]["status"] == "ACCEPTED"

    all_records = client.get("/api/historian").json()
    top = net.node.ledger.height
    tail = client.get("/api/historian", params={"fromHeight": top}).json()
    assert all(r["height"] == top for r in tail)
    assert len(tail) < len(all_records)
    head = client.get("/api/historian", params={"toHeight": 0}).json()
    assert all(r["height"] == 0 for r in head)


def test_list_requests_filters(gw):
    net, client = gw
    net.tx("p2", "RequestAccess", {"assetId": "a1", "level": "VIEW"})
    out = net.tx("p2", "RequestAccess", {"assetId": "a1", "level": "EDIT"})
    denied_id = out["result"]["requestId"]
    net.tx("p1", "DenyRequest", {"requestId": denied_id})

    records = client.get("/api/requests", params={"ownerId": "p1", "status": "PENDING"}).json()
    assert len(records) == 1
    assert records[0]["level"] == "VIEW" and records[0]["requesterId"] == "p2"
    assert set(records[0]) == {
        "requestId", "assetId", "requesterId", "level", "status", "createdAtHeight",
    }

    records = client.get("/api/requests", params={"assetId": "a1"}).json()
    assert [r["status"] for r in records] == ["PENDING", "DENIED"]
    assert records == sorted(records, key=lambda r: (r["createdAtHeight"], r["requestId"]))

    assert client.get("/api/requests", params={"ownerId": "p2"}).json() == []
    assert client.get("/api/requests", params={"requesterId": "nobody"}).json() == []


def test_list_requests_is_side_effect_free(gw):
    net, client = gw
    net.tx("p2", "RequestAccess", {"assetId": "a1", "level": "VIEW"})
    height = net.node.ledger.height
    digest = net.state_hash()
    assert len(client.get("/api/requests").json()) == 1
    assert net.node.ledger.height == height
    assert net.state_hash() == digest


def test_can_view_is_side_effect_free(gw):
    net, client = gw
    height = net.node.ledger.height
    digest = net.state_hash()
    resp = client.get("/api/can-view", params={"assetId": "a1", "userId": "p2"})
    assert resp.status_code == 200
    assert resp.json() == {"assetId": "a1", "userId": "p2", "canView": False}
    resp = client.get("/api/can-view", params={"assetId": "a1", "userId": "p1"})
    assert resp.json()["canView"] is True  # owner
    assert net.node.ledger.height == height
    assert net.state_hash() == digest


def test_chain_verify_endpoint(gw):
    net, client = gw
    resp = client.get("/api/chain/verify")
    assert resp.status_code == 200
    assert resp.json() == {"ok": True, "height": net.node.ledger.height}


# ---------------------------------------------------------------------------
# SMS grammar (pure parsing)
# ---------------------------------------------------------------------------

def test_parse_give_view_only():
    assert parse_sms_command("GIVE a1 VIEW u1,u2") == (
        "GiveAccess",
        {"assetId": "a1", "viewers": ["u1", "u2"], "editors": []},
    )


def test_parse_give_with_edit():
    assert parse_sms_command("give a1 view u1 edit u2,u3") == (
        "GiveAccess",
        {"assetId": "a1", "viewers": ["u1"], "editors": ["u2", "u3"]},
    )


def test_parse_ids_verbatim():
    tx_type, payload = parse_sms_command("CHECK AsSeT-9 UsEr-X")
    assert payload == {"assetId": "AsSeT-9", "userId": "UsEr-X"}


def test_parse_revoke_request_view():
    assert parse_sms_command("REVOKE a1 u1,u2")[1] == {"assetId": "a1", "users": ["u1", "u2"]}
    assert parse_sms_command("request a1 edit")[1] == {"assetId": "a1", "level": "EDIT"}
    assert parse_sms_command("VIEW a1") == ("ViewAsset", {"assetId": "a1"})


@pytest.mark.parametrize(
    "bad",
    [
        "",
        "   ",
        "HELLO a1",
        "GIVE a1",
        "GIVE a1 EDIT u1",
        "GIVE a1 VIEW u1 WRONG u2",
        "GIVE a1 VIEW u1 EDIT",
        "REQUEST a1 ADMIN",
        "REQUEST a1",
        "REVOKE a1",
        "CHECK a1",
        "VIEW",
        "VIEW a1 extra",
    ],
)
def test_parse_rejects_off_grammar(bad):
    with pytest.raises(SmsParseError):
        parse_sms_command(bad)


def test_parse_rejects_oversized_body():
    with pytest.raises(SmsParseError):
        parse_sms_command("VIEW " + "a" * SMS_MAX_BODY)


# ---------------------------------------------------------------------------
# SMS webhook end to end
# ---------------------------------------------------------------------------

def test_sms_give_then_check_then_view(gw):
    net, client = gw
    assert sms_text(sms(client, PHONE_P1, "GIVE a1 VIEW p2")) == "OK GiveAccess a1"
    assert net.node.check_view("a1", "p2") is True
    assert sms_text(sms(client, PHONE_P2, "CHECK a1 p2")) == "OK CanView a1 true"
    assert sms_text(sms(client, PHONE_P2, "VIEW a1")) == "OK ViewAsset a1 ds-001"
    assert sms_text(sms(client, PHONE_P1, "REVOKE a1 p2")) == "OK RevokeAccess a1"
    assert sms_text(sms(client, PHONE_P2, "CHECK a1 p2")) == "OK CanView a1 false"


def test_sms_request_reply_carries_request_id(gw):
    net, client = gw
    reply = sms_text(sms(client, PHONE_P2, "REQUEST a1 VIEW"))
    assert reply.startswith("OK RequestAccess a1 ")
    request_id = reply.split()[-1]
    record = net.node.state.get("AccessRequest", request_id)
    assert record is not None and record.body["status"] == "PENDING"


def test_sms_unknown_phone(gw):
    _, client = gw
    assert sms_text(sms(client, "+19998887777", "VIEW a1")) == "ERR UNKNOWN_PHONE"


def test_sms_parse_error_reply(gw):
    _, client = gw
    assert sms_text(sms(client, PHONE_P1, "MAKE ME A SANDWICH")) == "ERR PARSE_ERROR"


def test_sms_unknown_card(gw):
    _, client = gw
    assert sms_text(sms(client, "+15550009", "VIEW a1")) == "ERR UNKNOWN_CARD"


def test_sms_processor_rejection_reply(gw):
    _, client = gw
    assert sms_text(sms(client, PHONE_P2, "VIEW a1")) == "ERR ACCESS_DENIED"
    assert sms_text(sms(client, PHONE_P1, "VIEW missing")) == "ERR UNKNOWN_ASSET"


def test_sms_rejections_still_audited(gw):
    net, client = gw
    sms(client, PHONE_P2, "VIEW a1")
    records = [r for r in net.node.historian(tx_type="ViewAsset") if r.submitter == "p2"]
    assert len(records) == 1 and records[0].status == "REJECTED"


def test_sms_reply_is_xml_escaped(gw):
    _, client = gw
    reply = sms(client, PHONE_P1, "CHECK a&b p2")
    assert "a&amp;b" in reply.text
    assert sms_text(reply) == "OK CanView a&amp;b false"


def test_sms_oversized_body_is_parse_error(gw):
    _, client = gw
    assert sms_text(sms(client, PHONE_P1, "VIEW " + "x" * 2000)) == "ERR PARSE_ERROR"


# ---------------------------------------------------------------------------
# REST and SMS produce identical ledgers when inputs match
# ---------------------------------------------------------------------------

def test_rest_and_sms_equivalence_smoke(model, tmp_path):
    def scenario(via_sms: bool) -> str:
        net = Net(model, seed=42, deterministic=True)
        keystore = Keystore(tmp_path / ("keys-sms" if via_sms else "keys-rest"))
        key = net.add_user("p1")
        keystore.save(key)
        bindings = {PHONE_P1: PhoneBinding(PHONE_P1, "p1", key.card_id)}
        client = TestClient(create_app(net.node, keystore=keystore, phone_bindings=bindings))
        net.tx("p1", "CreateAsset", {"assetId": "a1", "datasetRef": "ds-001"})
        net.add_user("p2")
        if via_sms:
            assert sms_text(sms(client, PHONE_P1, "GIVE a1 VIEW p2")) == "OK GiveAccess a1"
        else:
            resp = post_tx(net, client, "p1", "GiveAccess", {"assetId": "a1", "viewers": ["p2"], "editors": []})
            assert resp.status_code == 200
        return net.state_hash()

    assert scenario(via_sms=True) == scenario(via_sms=False)
