"""Versioned rule parameters: the upgradeable half of the game logic.

All tunable game rules (combine-rarity table, pack composition, prices, the
marketplace fee) live in a single immutable ParamsVersion.  Installing a new
version through the admin upgrade path swaps which rules future transactions
dispatch to while leaving every account, token and listing untouched, which
is the ledger's stand-in for upgrading a proxied on-chain logic contract.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import TrigFunction
from .errors import InvalidParams
from .rng import (
    DEFAULT_COMBINE_TABLE,
    PackSpec,
    default_pack_spec,
    validate_combine_table,
)

DEFAULT_PACK_PRICE_CURRENCY = 100
DEFAULT_PACK_PRICE_XP = 100
DEFAULT_UPGRADE_XP_COST_PER_LEVEL = 100
DEFAULT_MARKET_FEE_BASIS_POINTS = 200

MAX_FEE_BASIS_POINTS = 1000


@dataclass(frozen=True)
class ParamsVersion:
    version: int
    combine_table: tuple[tuple[float, ...], ...]
    pack_spec: PackSpec
    pack_price_currency: int
    pack_price_xp: int
    upgrade_xp_cost_per_level: int
    market_fee_basis_points: int

    @classmethod
    def build(
        cls,
        version: int,
        combine_table=DEFAULT_COMBINE_TABLE,
        pack_spec: PackSpec | None = None,
        pack_price_currency: int = DEFAULT_PACK_PRICE_CURRENCY,
        pack_price_xp: int = DEFAULT_PACK_PRICE_XP,
        upgrade_xp_cost_per_level: int = DEFAULT_UPGRADE_XP_COST_PER_LEVEL,
        market_fee_basis_points: int = DEFAULT_MARKET_FEE_BASIS_POINTS,
    ) -> "ParamsVersion":
        if not isinstance(version, int) or version < 1:
            raise InvalidParams(f"version must be a positive integer, got {version!r}")
        for name, value in (
            ("pack_price_currency", pack_price_currency),
            ("pack_price_xp", pack_price_xp),
            ("upgrade_xp_cost_per_level", upgrade_xp_cost_per_level),
        ):
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise InvalidParams(f"{name} must be a positive integer, got {value!r}")
        fee = market_fee_basis_points
        if not isinstance(fee, int) or isinstance(fee, bool) or not 0 <= fee <= MAX_FEE_BASIS_POINTS:
            raise InvalidParams(
                f"market_fee_basis_points must be in [0, {MAX_FEE_BASIS_POINTS}], got {fee!r}"
            )
        return cls(
            version=version,
            combine_table=validate_combine_table(combine_table),
            pack_spec=pack_spec if pack_spec is not None else default_pack_spec(),
            pack_price_currency=pack_price_currency,
            pack_price_xp=pack_price_xp,
            upgrade_xp_cost_per_level=upgrade_xp_cost_per_level,
            market_fee_basis_points=market_fee_basis_points,
        )

    def to_payload(self) -> dict:
        """JSON-safe form used in upgrade events, snapshots and the admin API."""
        return {
            "version": self.version,
            "combine_table": [list(row) for row in self.combine_table],
            "pack_spec": {
                "cards_per_pack": self.pack_spec.cards_per_pack,
                "rarity_weights": list(self.pack_spec.rarity_weights),
                "catalog": [[f.sin_pow, f.cos_pow] for f in self.pack_spec.catalog],
            },
            "pack_price_currency": self.pack_price_currency,
            "pack_price_xp": self.pack_price_xp,
            "upgrade_xp_cost_per_level": self.upgrade_xp_cost_per_level,
            "market_fee_basis_points": self.market_fee_basis_points,
        }

    @classmethod
    def from_payload(cls, payload) -> "ParamsVersion":
        """Parse and validate an untrusted payload; raises InvalidParams."""
        if not isinstance(payload, dict):
            raise InvalidParams("params payload must be an object")
        allowed = {
            "version",
            "combine_table",
            "pack_spec",
            "pack_price_currency",
            "pack_price_xp",
            "upgrade_xp_cost_per_level",
            "market_fee_basis_points",
        }
        unknown = set(payload) - allowed
        if unknown:
            raise InvalidParams(f"unknown params fields: {sorted(unknown)}")
        if "version" not in payload:
            raise InvalidParams("params payload missing 'version'")
        kwargs = {}
        if "pack_spec" in payload:
            kwargs["pack_spec"] = _parse_pack_spec(payload["pack_spec"])
        for key in (
            "combine_table",
            "pack_price_currency",
            "pack_price_xp",
            "upgrade_xp_cost_per_level",
            "market_fee_basis_points",
        ):
            if key in payload:
                kwargs[key] = payload[key]
        try:
            return cls.build(payload["version"], **kwargs)
        except (TypeError, ValueError) as exc:
            raise InvalidParams(str(exc)) from exc


def _parse_pack_spec(raw) -> PackSpec:
    if not isinstance(raw, dict):
        raise InvalidParams("pack_spec must be an object")
    unknown = set(raw) - {"cards_per_pack", "rarity_weights", "catalog"}
    if unknown:
        raise InvalidParams(f"unknown pack_spec fields: {sorted(unknown)}")
    default = default_pack_spec()
    catalog = default.catalog
    if "catalog" in raw:
        entries = raw["catalog"]
        if not isinstance(entries, list):
            raise InvalidParams("pack_spec.catalog must be a list of [sin_pow, cos_pow] pairs")
        parsed = []
        for entry in entries:
            if not isinstance(entry, (list, tuple)) or len(entry) != 2:
                raise InvalidParams(f"bad catalog entry: {entry!r}")
            parsed.append(TrigFunction.checked(entry[0], entry[1]))
        catalog = tuple(parsed)
    return PackSpec.build(
        raw.get("cards_per_pack", default.cards_per_pack),
        raw.get("rarity_weights", default.rarity_weights),
        catalog,
    )


def default_params(version: int = 1) -> ParamsVersion:
    return ParamsVersion.build(version)
