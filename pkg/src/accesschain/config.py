"""Node configuration file: JSON, paths resolved relative to the file.

Shape::

    {
      "listen": {"host": "127.0.0.1", "port": 8080},
      "modelPaths": ["models/extra.netdef"],
      "blockPath": "data/chain.blocks",
      "keystorePath": "keys",
      "admin": {"participantId": "admin", "displayName": "Network Admin"},
      "phoneBindings": {
        "+13065550100": {"participantId": "p1", "cardId": "card-abc"}
      }
    }

Every key is optional; omitted modelPaths fall back to the three bundled
model files (identity layer plus both access-control families).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path


def bundled_model_paths() -> list:
    root = resources.files("accesschain") / "models"
    return sorted(Path(str(root)).glob("*.netdef"))


@dataclass(frozen=True)
class PhoneBinding:
    phone: str
    participant_id: str
    card_id: str


@dataclass
class NodeConfig:
    listen_host: str = "127.0.0.1"
    listen_port: int = 8080
    model_paths: list = field(default_factory=bundled_model_paths)
    block_path: Path = Path("chain.blocks")
    keystore_path: Path = Path("keys")
    admin_id: str = "admin"
    admin_display_name: str = "Network Admin"
    phone_bindings: dict = field(default_factory=dict)  # phone -> PhoneBinding

    @classmethod
    def load(cls, path) -> "NodeConfig":
        path = Path(path)
        obj = json.loads(path.read_text(encoding="utf-8"))
        base = path.parent

        def resolve(p: str) -> Path:
            candidate = Path(p)
            return candidate if candidate.is_absolute() else base / candidate

        listen = obj.get("listen", {})
        admin = obj.get("admin", {})
        bindings = {}
        for phone, entry in obj.get("phoneBindings", {}).items():
            bindings[phone] = PhoneBinding(
                phone=phone,
                participant_id=entry["participantId"],
                card_id=entry["cardId"],
            )
        model_paths = (
            [resolve(p) for p in obj["modelPaths"]]
            if "modelPaths" in obj
            else bundled_model_paths()
        )
        return cls(
            listen_host=listen.get("host", "127.0.0.1"),
            listen_port=listen.get("port", 8080),
            model_paths=model_paths,
            block_path=resolve(obj.get("blockPath", "chain.blocks")),
            keystore_path=resolve(obj.get("keystorePath", "keys")),
            admin_id=admin.get("participantId", "admin"),
            admin_display_name=admin.get("displayName", "Network Admin"),
            phone_bindings=bindings,
        )
