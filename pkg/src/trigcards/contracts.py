"""Game rules: card combining, packs, upgrades, the escrowed marketplace.

These are the transition rules that would live in the two on-chain logic
contracts: the card contract (combine / packs / upgrades / XP spending) and
the marketplace (listings held in escrow, purchases, sale history).  Each
handler validates everything first and mutates only after the last check,
so every rule is atomic: an error burns nothing, mints nothing, moves
nothing.
"""

from __future__ import annotations

from . import algebra
from .algebra import Rarity, VARIANT_COUNT, code_or_none, display_name
from .errors import (
    AlreadyMaxRarity,
    ExponentOutOfRange,
    InsufficientFunds,
    InsufficientXp,
    InvalidPrice,
    ListingNotActive,
    MalformedPayload,
    NotSeller,
    SameToken,
    SelfPurchase,
    VersionSkew,
)
from .ledger import (
    LedgerState,
    Listing,
    MARKET_ESCROW,
    SaleRecord,
    TransactionEvent,
    burn_token,
    field_int,
    field_str,
    handler,
    listing_view,
    mint_token,
    require_admin,
    require_holder,
    sale_view,
    token_view,
)
from .params import ParamsVersion
from .rng import combine_distribution, roll_pack, sample_rarity, seed_for_tx

COMBINE_OPS = {"multiply": algebra.multiply, "divide": algebra.divide}

BASIS_POINT_DENOMINATOR = 10_000


def _combine_op(payload: dict):
    op = field_str(payload, "op")
    try:
        return COMBINE_OPS[op]
    except KeyError:
        raise MalformedPayload(f"op must be 'multiply' or 'divide', got {op!r}") from None


@handler("Combine")
def _combine(state: LedgerState, event: TransactionEvent) -> dict:
    actor = field_str(event.payload, "actor")
    token_a = field_int(event.payload, "token_a")
    token_b = field_int(event.payload, "token_b")
    op = _combine_op(event.payload)
    if token_a == token_b:
        raise SameToken(f"cannot combine token {token_a} with itself")
    record_a = require_holder(state, token_a, actor)
    record_b = require_holder(state, token_b, actor)
    # range check before any mutation: a failed combine burns nothing
    result_function = op(record_a.function, record_b.function)

    stream = seed_for_tx(state.global_seed, event.seq)
    distribution = combine_distribution(
        record_a.rarity, record_b.rarity, state.params.combine_table
    )
    rarity = sample_rarity(distribution, stream)
    variant = stream.next_u64() % VARIANT_COUNT

    burn_token(state, token_a)
    burn_token(state, token_b)
    record = mint_token(state, actor, result_function, rarity, variant, event.seq)
    return {"new_token": token_view(record), "burned": [token_a, token_b]}


def preview_combine(state: LedgerState, token_a: int, token_b: int, op: str) -> dict:
    """Pure preview of a combine: the result function and its rarity odds.

    Never draws randomness and never touches state.  An out-of-range result
    is reported as an impossible outcome, not an error.
    """
    if op not in COMBINE_OPS:
        raise MalformedPayload(f"op must be 'multiply' or 'divide', got {op!r}")
    record_a = state.token(token_a)
    record_b = state.token(token_b)
    base = {
        "op": op,
        "token_a": token_view(record_a),
        "token_b": token_view(record_b),
    }
    try:
        result = COMBINE_OPS[op](record_a.function, record_b.function)
    except ExponentOutOfRange as exc:
        return {**base, "possible": False, "reason": exc.code, "message": str(exc)}
    distribution = combine_distribution(
        record_a.rarity, record_b.rarity, state.params.combine_table
    )
    outcomes = []
    for rarity in Rarity:
        codes = [code_or_none(result, rarity, v) for v in range(VARIANT_COUNT)]
        outcomes.append(
            {
                "rarity": rarity.name.lower(),
                "rarity_level": int(rarity),
                "color": rarity.color,
                "probability": distribution[int(rarity)],
                "display_name": display_name(result),
                "codes": None if codes[0] is None else codes,
            }
        )
    return {
        **base,
        "possible": True,
        "result": {
            "sin_pow": result.sin_pow,
            "cos_pow": result.cos_pow,
            "display_name": display_name(result),
        },
        "distribution": list(distribution),
        "outcomes": outcomes,
    }


def _mint_pack(state: LedgerState, actor: str, seq: int) -> list[dict]:
    stream = seed_for_tx(state.global_seed, seq)
    cards = roll_pack(state.params.pack_spec, stream)
    return [
        token_view(mint_token(state, actor, function, rarity, variant, seq))
        for function, rarity, variant in cards
    ]


@handler("BuyPack")
def _buy_pack(state: LedgerState, event: TransactionEvent) -> dict:
    actor = field_str(event.payload, "actor")
    account = state.account(actor)
    price = state.params.pack_price_currency
    if account.currency < price:
        raise InsufficientFunds(f"pack costs {price}, balance is {account.currency}")
    account.currency -= price
    state.treasury += price
    return {"tokens": _mint_pack(state, actor, event.seq), "paid_currency": price}


@handler("XpBuyPack")
def _xp_buy_pack(state: LedgerState, event: TransactionEvent) -> dict:
    actor = field_str(event.payload, "actor")
    account = state.account(actor)
    price = state.params.pack_price_xp
    if account.xp < price:
        raise InsufficientXp(f"pack costs {price} XP, balance is {account.xp}")
    account.xp -= price  # XP is destroyed, not transferred
    return {"tokens": _mint_pack(state, actor, event.seq), "paid_xp": price}


@handler("UpgradeCard")
def _upgrade_card(state: LedgerState, event: TransactionEvent) -> dict:
    actor = field_str(event.payload, "actor")
    token_id = field_int(event.payload, "token_id")
    record = require_holder(state, token_id, actor)
    if record.rarity == Rarity.LEGENDARY:
        raise AlreadyMaxRarity(f"token {token_id} is already legendary")
    account = state.account(actor)
    cost = state.params.upgrade_xp_cost_per_level * (int(record.rarity) + 1)
    if account.xp < cost:
        raise InsufficientXp(f"upgrade costs {cost} XP, balance is {account.xp}")
    account.xp -= cost
    function, variant = record.function, record.variant
    next_rarity = Rarity(int(record.rarity) + 1)
    burn_token(state, token_id)
    new_record = mint_token(state, actor, function, next_rarity, variant, event.seq)
    return {"new_token": token_view(new_record), "burned": [token_id], "paid_xp": cost}


@handler("List")
def _list_for_sale(state: LedgerState, event: TransactionEvent) -> dict:
    actor = field_str(event.payload, "actor")
    token_id = field_int(event.payload, "token_id")
    price = field_int(event.payload, "price")
    record = require_holder(state, token_id, actor)
    if price < 1:
        raise InvalidPrice(f"price must be >= 1, got {price}")
    listing = Listing(
        listing_id=state.next_listing_id,
        token_id=token_id,
        seller=actor,
        price=price,
        status="active",
    )
    state.next_listing_id += 1
    record.owner = MARKET_ESCROW
    state.listings[listing.listing_id] = listing
    return {"listing": listing_view(state, listing)}


def _active_listing(state: LedgerState, listing_id: int) -> Listing:
    listing = state.listings.get(listing_id)
    if listing is None or listing.status != "active":
        raise ListingNotActive(f"no active listing with id {listing_id!r}")
    return listing


@handler("CancelListing")
def _cancel_listing(state: LedgerState, event: TransactionEvent) -> dict:
    actor = field_str(event.payload, "actor")
    listing = _active_listing(state, field_int(event.payload, "listing_id"))
    if listing.seller != actor:
        raise NotSeller(f"listing {listing.listing_id} belongs to {listing.seller!r}")
    listing.status = "cancelled"
    state.tokens[listing.token_id].owner = listing.seller
    return {"listing_id": listing.listing_id, "token_id": listing.token_id}


@handler("Purchase")
def _purchase(state: LedgerState, event: TransactionEvent) -> dict:
    buyer_id = field_str(event.payload, "actor")
    listing = _active_listing(state, field_int(event.payload, "listing_id"))
    if listing.seller == buyer_id:
        raise SelfPurchase(f"cannot buy own listing {listing.listing_id}")
    buyer = state.account(buyer_id)
    seller = state.account(listing.seller)
    if buyer.currency < listing.price:
        raise InsufficientFunds(
            f"listing costs {listing.price}, balance is {buyer.currency}"
        )
    fee = listing.price * state.params.market_fee_basis_points // BASIS_POINT_DENOMINATOR
    buyer.currency -= listing.price
    seller.currency += listing.price - fee
    state.treasury += fee
    state.tokens[listing.token_id].owner = buyer_id
    listing.status = "sold"
    sale = SaleRecord(
        listing_id=listing.listing_id,
        token_id=listing.token_id,
        seller=listing.seller,
        buyer=buyer_id,
        price=listing.price,
        fee_paid=fee,
        seq=event.seq,
    )
    state.sales.append(sale)
    return {"sale": sale_view(sale)}


def sale_history(
    state: LedgerState, token_id: int | None = None, account: str | None = None
) -> list[SaleRecord]:
    """Chronological sale records, optionally filtered by token or participant."""
    records = state.sales
    if token_id is not None:
        records = [s for s in records if s.token_id == token_id]
    if account is not None:
        records = [s for s in records if account in (s.buyer, s.seller)]
    return list(records)


@handler("UpgradeParams")
def _upgrade_params(state: LedgerState, event: TransactionEvent) -> dict:
    require_admin(event.payload)
    raw = event.payload.get("params")
    new_params = ParamsVersion.from_payload(raw)
    if new_params.version != state.params.version + 1:
        raise VersionSkew(
            f"expected version {state.params.version + 1}, got {new_params.version}"
        )
    state.params = new_params
    return {"version": new_params.version}


def active_listings(state: LedgerState) -> list[Listing]:
    return [l for l in state.listings.values() if l.status == "active"]
