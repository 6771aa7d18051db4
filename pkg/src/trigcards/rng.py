"""Deterministic randomness: SplitMix64 streams, rarity tables, pack rolls.

Every random decision the engine makes flows through a SplitMix64 stream
seeded from (global seed XOR transaction sequence number), which makes the
whole ledger replayable bit-exactly on any platform.  SplitMix64 was chosen
because it is defined entirely by three integer constants, needs no
dependency, and ports to any language in a dozen lines.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import Rarity, TrigFunction, VARIANT_COUNT, base_catalog
from .errors import InvalidParams

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

DISTRIBUTION_TOLERANCE = 1e-12


def splitmix64(state: int) -> tuple[int, int]:
    """One SplitMix64 step: returns (output, advanced state)."""
    state = (state + _GAMMA) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return z ^ (z >> 31), state


class RngStream:
    """A SplitMix64 stream advanced one 64-bit draw at a time.

    Streams are cheap values: fork one with `clone()` instead of sharing.
    """

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        value, self.state = splitmix64(self.state)
        return value

    def next_unit(self) -> float:
        """Next draw mapped to [0, 1)."""
        return self.next_u64() / 2.0**64

    def clone(self) -> "RngStream":
        fork = RngStream(0)
        fork.state = self.state
        return fork


def seed_for_tx(global_seed: int, tx_index: int) -> RngStream:
    """Per-transaction stream: the global seed XOR the event sequence number."""
    return RngStream((global_seed ^ tx_index) & _MASK64)


def validate_distribution(probabilities) -> tuple[float, ...]:
    """Check a 4-entry rarity distribution: non-negative, sums to 1."""
    values = tuple(float(p) for p in probabilities)
    if len(values) != len(Rarity):
        raise InvalidParams(f"distribution needs {len(Rarity)} entries, got {len(values)}")
    if any(p < 0 for p in values):
        raise InvalidParams(f"negative probability in {values}")
    total = sum(values)
    if abs(total - 1.0) > DISTRIBUTION_TOLERANCE:
        raise InvalidParams(f"distribution sums to {total!r}, not 1")
    return values


def sample_rarity(distribution, stream: RngStream) -> Rarity:
    """CDF inversion: smallest level whose cumulative probability exceeds the draw."""
    u = stream.next_unit()
    cumulative = 0.0
    for level, p in enumerate(distribution):
        cumulative += p
        if cumulative > u:
            return Rarity(level)
    return Rarity(len(Rarity) - 1)


def combine_distribution(rarity_a: Rarity, rarity_b: Rarity, table) -> tuple[float, ...]:
    """Outcome distribution for combining two cards of the given rarities.

    `table` is either 4 rows keyed by max(input levels) or a full 16-row
    override keyed by the ordered pair (row index a*4 + b).
    """
    if len(table) == len(Rarity):
        return tuple(table[max(int(rarity_a), int(rarity_b))])
    if len(table) == len(Rarity) ** 2:
        return tuple(table[int(rarity_a) * len(Rarity) + int(rarity_b)])
    raise InvalidParams(f"combine table must have 4 or 16 rows, got {len(table)}")


def validate_combine_table(table) -> tuple[tuple[float, ...], ...]:
    if len(table) not in (len(Rarity), len(Rarity) ** 2):
        raise InvalidParams(f"combine table must have 4 or 16 rows, got {len(table)}")
    return tuple(validate_distribution(row) for row in table)


@dataclass(frozen=True)
class PackSpec:
    """What a purchased pack contains and how it is drawn."""

    cards_per_pack: int
    rarity_weights: tuple[float, ...]
    catalog: tuple[TrigFunction, ...]

    @classmethod
    def build(cls, cards_per_pack: int, rarity_weights, catalog) -> "PackSpec":
        if not isinstance(cards_per_pack, int) or cards_per_pack < 1:
            raise InvalidParams(f"cards_per_pack must be >= 1, got {cards_per_pack!r}")
        functions = tuple(catalog)
        if not functions:
            raise InvalidParams("pack catalog is empty")
        return cls(cards_per_pack, validate_distribution(rarity_weights), functions)


# Engine defaults; every value is overridable through the engine config.
DEFAULT_COMBINE_TABLE = (
    (0.70, 0.24, 0.05, 0.01),  # max input rarity: common
    (0.10, 0.65, 0.20, 0.05),  # uncommon
    (0.05, 0.10, 0.65, 0.20),  # rare
    (0.02, 0.08, 0.15, 0.75),  # legendary
)
DEFAULT_PACK_WEIGHTS = (0.65, 0.22, 0.10, 0.03)
DEFAULT_CARDS_PER_PACK = 5


def default_pack_spec() -> PackSpec:
    return PackSpec.build(DEFAULT_CARDS_PER_PACK, DEFAULT_PACK_WEIGHTS, base_catalog())


def roll_pack(spec: PackSpec, stream: RngStream) -> list[tuple[TrigFunction, Rarity, int]]:
    """Draw a full pack; consumes exactly 3 draws per card, in a fixed order.

    Per card: rarity first, then catalog index, then variant.  The modulo
    mapping is uniform enough at catalog sizes far below 2**64 and keeps the
    scheme trivially portable.
    """
    cards = []
    for _ in range(spec.cards_per_pack):
        rarity = sample_rarity(spec.rarity_weights, stream)
        function = spec.catalog[stream.next_u64() % len(spec.catalog)]
        variant = stream.next_u64() % VARIANT_COUNT
        cards.append((function, rarity, variant))
    return cards
