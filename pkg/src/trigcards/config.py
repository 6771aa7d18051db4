"""Engine configuration: one JSON file drives seeds, rules, prices and paths.

Every knob has a default so a bare `{}` config boots a playable engine; the
loader is strict about key names so a typo fails fast instead of silently
falling back.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import InvalidParams
from .params import (
    DEFAULT_MARKET_FEE_BASIS_POINTS,
    DEFAULT_PACK_PRICE_CURRENCY,
    DEFAULT_PACK_PRICE_XP,
    DEFAULT_UPGRADE_XP_COST_PER_LEVEL,
    ParamsVersion,
    _parse_pack_spec,
)
from .rng import DEFAULT_COMBINE_TABLE, PackSpec, default_pack_spec, validate_combine_table
from .trivia import QuestionBank, load_default_bank, load_questions

DEFAULT_GLOBAL_SEED = 42
DEFAULT_ADMIN_SECRET = "admin"
DEFAULT_STATE_DIR = "./state"
DEFAULT_SNAPSHOT_EVERY = 1000

_TOP_KEYS = {
    "global_seed",
    "combine_table",
    "pack_spec",
    "prices",
    "fee_bp",
    "question_file",
    "admin_secret",
    "state_dir",
    "snapshot_every",
}
_PRICE_KEYS = {"pack_currency", "pack_xp", "upgrade_xp_per_level"}


@dataclass
class EngineConfig:
    global_seed: int = DEFAULT_GLOBAL_SEED
    combine_table: tuple = DEFAULT_COMBINE_TABLE
    pack_spec: PackSpec = field(default_factory=default_pack_spec)
    pack_price_currency: int = DEFAULT_PACK_PRICE_CURRENCY
    pack_price_xp: int = DEFAULT_PACK_PRICE_XP
    upgrade_xp_cost_per_level: int = DEFAULT_UPGRADE_XP_COST_PER_LEVEL
    fee_bp: int = DEFAULT_MARKET_FEE_BASIS_POINTS
    question_file: str | None = None
    admin_secret: str = DEFAULT_ADMIN_SECRET
    state_dir: str = DEFAULT_STATE_DIR
    snapshot_every: int = DEFAULT_SNAPSHOT_EVERY

    @classmethod
    def from_dict(cls, raw: dict, base_dir: Path | None = None) -> "EngineConfig":
        if not isinstance(raw, dict):
            raise InvalidParams("config must be a JSON object")
        unknown = set(raw) - _TOP_KEYS
        if unknown:
            raise InvalidParams(f"unknown config keys: {sorted(unknown)}")
        config = cls()
        if "global_seed" in raw:
            seed = raw["global_seed"]
            if not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed < 2**64:
                raise InvalidParams(f"global_seed must be a u64, got {seed!r}")
            config.global_seed = seed
        if "combine_table" in raw:
            config.combine_table = validate_combine_table(raw["combine_table"])
        if "pack_spec" in raw:
            config.pack_spec = _parse_pack_spec(raw["pack_spec"])
        if "prices" in raw:
            prices = raw["prices"]
            if not isinstance(prices, dict) or set(prices) - _PRICE_KEYS:
                raise InvalidParams(f"prices must be an object with keys {sorted(_PRICE_KEYS)}")
            config.pack_price_currency = prices.get("pack_currency", config.pack_price_currency)
            config.pack_price_xp = prices.get("pack_xp", config.pack_price_xp)
            config.upgrade_xp_cost_per_level = prices.get(
                "upgrade_xp_per_level", config.upgrade_xp_cost_per_level
            )
        if "fee_bp" in raw:
            config.fee_bp = raw["fee_bp"]
        if "question_file" in raw and raw["question_file"] is not None:
            path = Path(raw["question_file"])
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            config.question_file = str(path)
        if "admin_secret" in raw:
            secret = raw["admin_secret"]
            if not isinstance(secret, str) or not secret:
                raise InvalidParams("admin_secret must be a nonempty string")
            config.admin_secret = secret
        if "state_dir" in raw:
            path = Path(raw["state_dir"])
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            config.state_dir = str(path)
        if "snapshot_every" in raw:
            every = raw["snapshot_every"]
            if not isinstance(every, int) or isinstance(every, bool) or every < 1:
                raise InvalidParams(f"snapshot_every must be >= 1, got {every!r}")
            config.snapshot_every = every
        config.initial_params()  # validates the price/fee combination early
        return config

    @classmethod
    def load(cls, path: str | Path) -> "EngineConfig":
        file_path = Path(path)
        try:
            raw = json.loads(file_path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidParams(f"cannot read config {file_path}: {exc}") from exc
        return cls.from_dict(raw, base_dir=file_path.parent)

    def initial_params(self) -> ParamsVersion:
        """Rule parameters active at genesis (version 1)."""
        return ParamsVersion.build(
            1,
            combine_table=self.combine_table,
            pack_spec=self.pack_spec,
            pack_price_currency=self.pack_price_currency,
            pack_price_xp=self.pack_price_xp,
            upgrade_xp_cost_per_level=self.upgrade_xp_cost_per_level,
            market_fee_basis_points=self.fee_bp,
        )

    def load_bank(self) -> QuestionBank:
        if self.question_file is None:
            return load_default_bank()
        return load_questions(self.question_file)
