"""Card identity: sin/cos monomials, the 4-digit code, display names.

A card's mathematical identity is the monomial sin^a(x)*cos^b(x), stored as
the exponent pair (a, b).  Gameplay keeps both exponents inside
[-EXPONENT_LIMIT, +EXPONENT_LIMIT]; combining two cards whose result would
leave that range is an error, never a clamp, so the algebra laws
(commutativity, inverse) hold exactly wherever an operation succeeds.

The 4-digit code (sin digit, cos digit, rarity digit, variant digit) is the
image-asset basename and is only defined for non-negative exponents; the
signed ``canonical_key`` covers the whole universe and is the identity used
everywhere else.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

from .errors import ExponentOutOfRange, MalformedCode, NotEncodable

EXPONENT_LIMIT = 3

RARITY_COLORS = ("green", "blue", "purple", "red")


class Rarity(IntEnum):
    COMMON = 0
    UNCOMMON = 1
    RARE = 2
    LEGENDARY = 3

    @property
    def color(self) -> str:
        return RARITY_COLORS[self.value]


VARIANT_COUNT = 4


def check_variant(index: int) -> int:
    if not isinstance(index, int) or isinstance(index, bool) or not 0 <= index < VARIANT_COUNT:
        raise MalformedCode(f"variant must be an integer in [0, 3], got {index!r}")
    return index


@dataclass(frozen=True, order=True)
class TrigFunction:
    """Monomial sin^sin_pow(x) * cos^cos_pow(x).

    The bare constructor performs no range check because the code grid
    admits exponent digits up to 9 for asset naming; every gameplay path
    builds instances through :meth:`checked`, which enforces the playable
    range.
    """

    sin_pow: int
    cos_pow: int

    @classmethod
    def checked(cls, sin_pow: int, cos_pow: int) -> "TrigFunction":
        for value in (sin_pow, cos_pow):
            if not isinstance(value, int) or isinstance(value, bool):
                raise ExponentOutOfRange(f"exponent must be an integer, got {value!r}")
            if not -EXPONENT_LIMIT <= value <= EXPONENT_LIMIT:
                raise ExponentOutOfRange(
                    f"exponent {value} outside [-{EXPONENT_LIMIT}, {EXPONENT_LIMIT}]"
                )
        return cls(sin_pow, cos_pow)

    @property
    def is_identity(self) -> bool:
        return self.sin_pow == 0 and self.cos_pow == 0


IDENTITY = TrigFunction(0, 0)


def multiply(f: TrigFunction, g: TrigFunction) -> TrigFunction:
    """Product of two monomials: exponents add."""
    return TrigFunction.checked(f.sin_pow + g.sin_pow, f.cos_pow + g.cos_pow)


def divide(f: TrigFunction, g: TrigFunction) -> TrigFunction:
    """Quotient of two monomials: exponents subtract."""
    return TrigFunction.checked(f.sin_pow - g.sin_pow, f.cos_pow - g.cos_pow)


def encode_card(f: TrigFunction, rarity: Rarity, variant: int) -> str:
    """4-digit image-asset code: <sin pow><cos pow><rarity><variant>.

    Only defined when both exponents are single non-negative digits;
    negative exponents have no digit and raise NotEncodable.
    """
    check_variant(variant)
    for value in (f.sin_pow, f.cos_pow):
        if value < 0:
            raise NotEncodable(f"negative exponent {value} has no code digit")
        if value > 9:
            raise NotEncodable(f"exponent {value} exceeds one digit")
    return f"{f.sin_pow}{f.cos_pow}{int(rarity)}{variant}"


def decode_card(code: str) -> tuple[TrigFunction, Rarity, int]:
    """Inverse of :func:`encode_card`: code string back to (function, rarity, variant)."""
    if not isinstance(code, str) or len(code) != 4 or not code.isascii() or not code.isdigit():
        raise MalformedCode(f"code must be 4 ASCII digits, got {code!r}")
    sin_pow, cos_pow, rarity_digit, variant_digit = (int(ch) for ch in code)
    if rarity_digit > 3:
        raise MalformedCode(f"rarity digit {rarity_digit} outside [0, 3]")
    if variant_digit > 3:
        raise MalformedCode(f"variant digit {variant_digit} outside [0, 3]")
    return TrigFunction(sin_pow, cos_pow), Rarity(rarity_digit), variant_digit


def code_or_none(f: TrigFunction, rarity: Rarity, variant: int) -> str | None:
    """Asset code when one exists, None for signed exponents."""
    try:
        return encode_card(f, rarity, variant)
    except NotEncodable:
        return None


def canonical_key(f: TrigFunction, rarity: Rarity, variant: int) -> str:
    """Signed identity string covering the whole card universe, e.g. "s1c-1r3v1"."""
    check_variant(variant)
    return f"s{f.sin_pow}c{f.cos_pow}r{int(rarity)}v{variant}"


_FACTOR_NAMES = (
    # (positive name, reciprocal name) per axis
    ("sin", "csc"),
    ("cos", "sec"),
)


def display_name(f: TrigFunction) -> str:
    """Human-readable function name.

    The constant card reads "1", the two single-quotient cards get their
    standard identities tan/cot, and everything else is the product of
    sin/cos factors with csc/sec for negative exponents.
    """
    if f.is_identity:
        return "1"
    if (f.sin_pow, f.cos_pow) == (1, -1):
        return "tan(x)"
    if (f.sin_pow, f.cos_pow) == (-1, 1):
        return "cot(x)"
    parts = []
    for power, (name, reciprocal) in zip((f.sin_pow, f.cos_pow), _FACTOR_NAMES):
        if power == 0:
            continue
        base = name if power > 0 else reciprocal
        magnitude = abs(power)
        exponent = f"^{magnitude}" if magnitude > 1 else ""
        parts.append(f"{base}{exponent}(x)")
    return "".join(parts)


def base_catalog() -> list[TrigFunction]:
    """The 8 pack-mintable starter functions: exponents in {0,1,2} minus the constant."""
    return [
        TrigFunction(a, b)
        for a in range(3)
        for b in range(3)
        if (a, b) != (0, 0)
    ]
