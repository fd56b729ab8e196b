from __future__ import annotations

import pytest

from accesschain import KeyPair
from accesschain.node import SubmitRejected

from conftest import Net


def rejected(net: Net, pid: str, tx_type: str, payload: dict, code: str) -> dict:
    before = net.state_hash()
    out = net.tx(pid, tx_type, payload)
    assert out["status"] == "REJECTED"
    assert out["errorCode"] == code
    assert net.state_hash() == before  # every error path leaves state untouched
    return out


def active_cards(net: Net, pid: str) -> list:
    return [
        r
        for r in net.node.state.list_records("IdentityCard")
        if r.body["participantId"] == pid and r.body["status"] == "ACTIVE"
    ]


def test_bootstrap_creates_admin_and_card(net):
    assert net.node.ledger.height == 0
    genesis = net.node.ledger.blocks[0]
    assert [e.tx_type for e, _ in genesis.entries] == ["RegisterParticipant", "IssueIdentity"]
    admin = net.node.state.get("Participant", "admin")
    assert admin.body["networkAdmin"] is True
    assert len(active_cards(net, "admin")) == 1


def test_register_and_issue_flow(net):
    net.add_user("p1")
    p1 = net.node.state.get("Participant", "p1")
    assert p1.body["networkAdmin"] is False
    assert len(active_cards(net, "p1")) == 1


def test_register_duplicate(net):
    net.add_user("p1")
    rejected(
        net,
        "admin",
        "RegisterParticipant",
        {"participantId": "p1", "displayName": "again"},
        "DUPLICATE_PARTICIPANT",
    )


def test_register_requires_admin(net):
    net.add_user("p1")
    rejected(
        net,
        "p1",
        "RegisterParticipant",
        {"participantId": "p2", "displayName": "p2"},
        "NOT_AUTHORIZED",
    )


def test_issue_unknown_participant(net):
    rejected(
        net,
        "admin",
        "IssueIdentity",
        {"participantId": "ghost", "cardId": "card-g", "publicKey": KeyPair.generate().public_key},
        "UNKNOWN_PARTICIPANT",
    )


def test_issue_second_card_revokes_first(net):
    net.add_user("p1")
    first_card = net.keys["p1"].card_id
    net.issue_card("p1")
    cards = active_cards(net, "p1")
    assert len(cards) == 1
    assert cards[0].record_id != first_card
    first = net.node.state.get("IdentityCard", first_card)
    assert first.body["status"] == "REVOKED"


def test_at_most_one_active_card_across_many_issues(net):
    net.add_user("p1")
    for _ in range(4):
        net.issue_card("p1")
    assert len(active_cards(net, "p1")) == 1


def test_holder_can_issue_own_replacement(net):
    net.add_user("p1")
    pair = KeyPair.generate()
    out = net.tx(
        "p1",
        "IssueIdentity",
        {"participantId": "p1", "cardId": "card-self", "publicKey": pair.public_key},
    )
    assert out["status"] == "ACCEPTED"


def test_third_party_issue_requires_admin(net):
    net.add_user("p1")
    net.add_user("p2")
    rejected(
        net,
        "p1",
        "IssueIdentity",
        {"participantId": "p2", "cardId": "card-x", "publicKey": KeyPair.generate().public_key},
        "NOT_AUTHORIZED",
    )


def test_duplicate_card_id(net):
    net.add_user("p1")
    rejected(
        net,
        "admin",
        "IssueIdentity",
        {
            "participantId": "p1",
            "cardId": net.keys["p1"].card_id,
            "publicKey": KeyPair.generate().public_key,
        },
        "DUPLICATE_CARD",
    )


def test_old_key_stops_working_after_reissue(net):
    net.add_user("p1")
    old_key = net.keys["p1"]
    net.issue_card("p1")
    before = net.state_hash()
    env = net.node.new_envelope("CreateAsset", {"assetId": "a1", "datasetRef": "r"}, old_key)
    with pytest.raises(SubmitRejected) as exc:
        net.node.submit_envelope(env)
    assert exc.value.code == "BAD_SIGNATURE"
    assert net.state_hash() == before


def test_revoke_identity_lifecycle(net):
    net.add_user("p1")
    card_id = net.keys["p1"].card_id
    out = net.tx("admin", "RevokeIdentity", {"cardId": card_id})
    assert out["status"] == "ACCEPTED"
    assert net.node.state.get("IdentityCard", card_id).body["status"] == "REVOKED"
    rejected(net, "admin", "RevokeIdentity", {"cardId": card_id}, "ALREADY_REVOKED")
    rejected(net, "admin", "RevokeIdentity", {"cardId": "nope"}, "UNKNOWN_CARD")


def test_revoked_key_cannot_sign(net):
    net.add_user("p1")
    net.tx("admin", "RevokeIdentity", {"cardId": net.keys["p1"].card_id})
    before = net.state_hash()
    env = net.node.new_envelope("CreateAsset", {"assetId": "a1", "datasetRef": "r"}, net.keys["p1"])
    with pytest.raises(SubmitRejected) as exc:
        net.node.submit_envelope(env)
    assert exc.value.code == "BAD_SIGNATURE"
    assert net.state_hash() == before


def test_revoke_requires_holder_or_admin(net):
    net.add_user("p1")
    net.add_user("p2")
    rejected(net, "p2", "RevokeIdentity", {"cardId": net.keys["p1"].card_id}, "NOT_AUTHORIZED")


def test_holder_can_revoke_own_card(net):
    net.add_user("p1")
    out = net.tx("p1", "RevokeIdentity", {"cardId": net.keys["p1"].card_id})
    assert out["status"] == "ACCEPTED"
    assert len(active_cards(net, "p1")) == 0
