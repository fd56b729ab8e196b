"""Command-line entry points: run the node, issue identities, audit the chain.

`verify` and `replay` exit nonzero when the chain fails its checks, so both
slot into scripts and CI. `id issue` runs against the block file directly;
stop the node first.
"""

from __future__ import annotations

import argparse
import logging
import sys
import uuid

from .chain import ACCEPTED, BlockStore, verify_chain
from .config import NodeConfig
from .errors import ChainError
from .identity import KeyFile, KeyPair, Keystore
from .netdef import load_models
from .node import Node, SubmitRejected, replay_state_hashes

log = logging.getLogger(__name__)


def _load_config(args) -> NodeConfig:
    config = NodeConfig.load(args.config) if args.config else NodeConfig()
    if getattr(args, "model", None):
        config.model_paths = list(args.model)
    if getattr(args, "blocks", None):
        config.block_path = args.blocks
    return config


def _build_node(config: NodeConfig) -> tuple:
    model = load_models(config.model_paths)
    store = BlockStore(config.block_path)
    keystore = Keystore(config.keystore_path)
    if store.exists():
        node = Node.open(model, store)
    else:
        node, admin_key = Node.bootstrap(
            model, store, config.admin_id, config.admin_display_name
        )
        path = keystore.save(admin_key)
        print(f"bootstrapped new network; admin key file: {path}")
    return node, keystore


def cmd_node_start(args) -> int:
    import uvicorn

    from .gateway import create_app

    config = _load_config(args)
    node, keystore = _build_node(config)
    app = create_app(node, keystore, config.phone_bindings)
    print(f"listening on http://{config.listen_host}:{config.listen_port}")
    uvicorn.run(app, host=config.listen_host, port=config.listen_port, log_level="info")
    return 0


def cmd_id_issue(args) -> int:
    config = _load_config(args)
    node, keystore = _build_node(config)
    admin_key = keystore.load_for_participant(config.admin_id)
    participant_id = args.participant

    if args.register:
        envelope = node.new_envelope(
            "RegisterParticipant",
            {"participantId": participant_id, "displayName": args.display_name or participant_id},
            admin_key,
        )
        outcome = _submit(node, envelope)
        if outcome is None:
            return 1

    pair = KeyPair.generate()
    card_id = f"card-{uuid.uuid4()}"
    envelope = node.new_envelope(
        "IssueIdentity",
        {"participantId": participant_id, "cardId": card_id, "publicKey": pair.public_key},
        admin_key,
    )
    outcome = _submit(node, envelope)
    if outcome is None:
        return 1
    path = keystore.save(
        KeyFile(
            card_id=card_id,
            participant_id=participant_id,
            public_key=pair.public_key,
            secret_key=pair.secret_key,
        )
    )
    print(f"issued card {card_id} for {participant_id}")
    print(f"key file: {path}")
    return 0


def _submit(node: Node, envelope):
    try:
        outcome = node.submit_envelope(envelope)
    except SubmitRejected as exc:
        print(f"rejected before commit: {exc.code}: {exc}", file=sys.stderr)
        return None
    if outcome["status"] != ACCEPTED:
        print(f"rejected: {outcome.get('errorCode')}", file=sys.stderr)
        return None
    return outcome


def cmd_verify(args) -> int:
    config = _load_config(args)
    store = BlockStore(config.block_path)
    if not store.exists():
        print(f"no block file at {config.block_path}", file=sys.stderr)
        return 2
    try:
        blocks = store.load()
    except ChainError as exc:
        print(f"FAULT height={exc.height} reason={exc.code} {exc}", file=sys.stderr)
        return 1
    fault = verify_chain(blocks, replay_state_hashes)
    if fault is not None:
        print(f"FAULT height={fault.height} reason={fault.reason} {fault.detail}", file=sys.stderr)
        return 1
    print(f"OK height={blocks[-1].height} blocks={len(blocks)}")
    return 0


def cmd_replay(args) -> int:
    config = _load_config(args)
    store = BlockStore(config.block_path)
    if not store.exists():
        print(f"no block file at {config.block_path}", file=sys.stderr)
        return 2
    try:
        blocks = store.load()
    except ChainError as exc:
        print(f"FAULT height={exc.height} reason={exc.code} {exc}", file=sys.stderr)
        return 1
    ok = True
    for height, digest in enumerate(replay_state_hashes(blocks)):
        match = digest == blocks[height].state_hash
        ok = ok and match
        print(f"height={height} stateHash={digest} {'ok' if match else 'MISMATCH'}")
    if not ok:
        print("replay diverged from recorded state hashes", file=sys.stderr)
        return 1
    print(f"replayed {len(blocks)} blocks, all state hashes match")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="accesschain",
        description="Permissioned-ledger access control node and audit tools",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="path to the node config JSON")
        p.add_argument(
            "--model",
            action="append",
            help="model file path (repeatable; overrides config modelPaths)",
        )

    node_p = sub.add_parser("node", help="node lifecycle")
    node_sub = node_p.add_subparsers(dest="node_command", required=True)
    start_p = node_sub.add_parser("start", help="start the HTTP gateway")
    common(start_p)
    start_p.set_defaults(func=cmd_node_start)

    id_p = sub.add_parser("id", help="identity management")
    id_sub = id_p.add_subparsers(dest="id_command", required=True)
    issue_p = id_sub.add_parser("issue", help="issue a new identity card and key file")
    common(issue_p)
    issue_p.add_argument("--participant", required=True, help="participant id")
    issue_p.add_argument("--display-name", help="display name when registering")
    issue_p.add_argument(
        "--register", action="store_true", help="register the participant first"
    )
    issue_p.set_defaults(func=cmd_id_issue)

    verify_p = sub.add_parser("verify", help="verify a block file, exit nonzero on fault")
    common(verify_p)
    verify_p.add_argument("--blocks", help="block file path (overrides config)")
    verify_p.set_defaults(func=cmd_verify)

    replay_p = sub.add_parser("replay", help="replay a block file and print state hashes")
    common(replay_p)
    replay_p.add_argument("--blocks", help="block file path (overrides config)")
    replay_p.set_defaults(func=cmd_replay)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
