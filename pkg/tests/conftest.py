"""Shared fixtures: a bootstrapped in-memory network with key management."""

from __future__ import annotations

import random
import uuid

import pytest

from accesschain import BlockStore, KeyFile, KeyPair, Node, load_models
from accesschain.config import bundled_model_paths
from accesschain.netdef import NetworkModel


def seeded_tx_ids(seed: int):
    rng = random.Random(seed)

    def factory() -> str:
        return str(uuid.UUID(int=rng.getrandbits(128), version=4))

    return factory


def ticking_clock(start: int = 1_700_000_000_000, step: int = 1):
    holder = {"now": start}

    def clock() -> int:
        holder["now"] += step
        return holder["now"]

    return clock


def seed_bytes(n: int) -> bytes:
    return bytes([n % 256]) * 32


class Net:
    """A bootstrapped node plus the key files of every registered user."""

    def __init__(
        self,
        model: NetworkModel,
        store: BlockStore | None = None,
        seed: int = 0,
        deterministic: bool = False,
    ):
        kwargs = {}
        if deterministic:
            kwargs["clock"] = ticking_clock()
            kwargs["tx_id_factory"] = seeded_tx_ids(seed)
            kwargs["key_pair"] = KeyPair.from_seed(seed_bytes(seed + 1))
        self.node, admin_key = Node.bootstrap(model, store, "admin", "Network Admin", **kwargs)
        self.deterministic = deterministic
        self.seed = seed
        self.keys: dict = {"admin": admin_key}
        self._card_counter = 0

    def tx(self, pid: str, tx_type: str, payload: dict) -> dict:
        return self.node.submit_envelope(
            self.node.new_envelope(tx_type, payload, self.keys[pid])
        )

    def add_user(self, pid: str, display_name: str | None = None) -> KeyFile:
        out = self.tx(
            "admin",
            "RegisterParticipant",
            {"participantId": pid, "displayName": display_name or pid},
        )
        assert out["status"] == "ACCEPTED", out
        return self.issue_card(pid)

    def issue_card(self, pid: str) -> KeyFile:
        self._card_counter += 1
        if self.deterministic:
            pair = KeyPair.from_seed(seed_bytes(self.seed + 100 + self._card_counter))
            card_id = f"card-{pid}-{self._card_counter}"
        else:
            pair = KeyPair.generate()
            card_id = f"card-{uuid.uuid4()}"
        out = self.tx(
            "admin",
            "IssueIdentity",
            {"participantId": pid, "cardId": card_id, "publicKey": pair.public_key},
        )
        assert out["status"] == "ACCEPTED", out
        key = KeyFile(
            card_id=card_id,
            participant_id=pid,
            public_key=pair.public_key,
            secret_key=pair.secret_key,
        )
        self.keys[pid] = key
        return key

    def state_hash(self) -> str:
        return self.node.state.state_hash()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Print one PASS/FAIL line per acceptance test at the end of the run."""
    del exitstatus, config
    rows = []
    for status, verdict in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL")):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py" not in nodeid:
                continue
            if verdict == "PASS" and getattr(report, "when", "call") != "call":
                continue
            rows.append((nodeid.split("::")[-1], verdict))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    seen = set()
    for name, verdict in rows:
        if name in seen:
            continue
        seen.add(name)
        label = name.removeprefix("test_").replace("_", " ")
        terminalreporter.write_line(f"{label}: {verdict}")


@pytest.fixture(scope="session")
def model() -> NetworkModel:
    return load_models(bundled_model_paths())


@pytest.fixture
def net(model) -> Net:
    return Net(model)


@pytest.fixture
def disk_net(model, tmp_path) -> Net:
    return Net(model, store=BlockStore(tmp_path / "chain.blocks"))
