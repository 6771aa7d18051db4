"""Event-sourced ledger: the deterministic stand-in for the chain.

State exists only as the left-fold of an append-only event log over the
genesis state.  Handlers validate every precondition before touching
anything, so a rejected event can never leave a trace; accepted events are
the log, and replaying the log reproduces the state bit-for-bit, which the
snapshot hash makes checkable.

The module owns the generic kinds (CreateAccount, Faucet, Mint, Burn,
Transfer); game-rule kinds register themselves from `contracts` and
`trivia` through the same handler table.
"""

from __future__ import annotations

import hashlib
import json
import re
import struct
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator

from .algebra import Rarity, TrigFunction, canonical_key, check_variant, code_or_none, display_name
from .errors import (
    AccountExists,
    CorruptLog,
    EngineError,
    InvalidAccountId,
    InvalidAmount,
    MalformedPayload,
    NotAdmin,
    NotOwner,
    SequenceGap,
    TokenEscrowed,
    UnknownAccount,
    UnknownKind,
    UnknownToken,
)
from .params import ParamsVersion, default_params

# Reserved principals: '@' is outside the account-id charset, so neither can
# ever collide with a player account.
MARKET_ESCROW = "@escrow"
ADMIN_ACTOR = "@admin"

ACCOUNT_ID_PATTERN = re.compile(r"^[a-z0-9_-]{1,64}$")
MAX_SECRET_LENGTH = 128

FIRST_TOKEN_ID = 1
FIRST_LISTING_ID = 1


@dataclass
class Account:
    account_id: str
    currency: int = 0
    xp: int = 0
    secret: str = ""


@dataclass
class TokenRecord:
    token_id: int
    function: TrigFunction
    rarity: Rarity
    variant: int
    owner: str
    minted_at: int


@dataclass
class Listing:
    listing_id: int
    token_id: int
    seller: str
    price: int
    status: str  # "active" | "sold" | "cancelled"


@dataclass
class SaleRecord:
    listing_id: int
    token_id: int
    seller: str
    buyer: str
    price: int
    fee_paid: int
    seq: int


@dataclass
class TransactionEvent:
    seq: int
    kind: str
    payload: dict
    wall_clock: float  # informational only; excluded from semantics and hashing

    def to_json_line(self) -> str:
        return json.dumps(
            {"seq": self.seq, "kind": self.kind, "payload": self.payload, "wall_clock": self.wall_clock},
            sort_keys=True,
            separators=(",", ":"),
        )


@dataclass
class LedgerState:
    global_seed: int
    params: ParamsVersion
    accounts: dict[str, Account] = field(default_factory=dict)
    tokens: dict[int, TokenRecord] = field(default_factory=dict)
    listings: dict[int, Listing] = field(default_factory=dict)
    sales: list[SaleRecord] = field(default_factory=list)
    answered: dict[str, set[str]] = field(default_factory=dict)
    next_token_id: int = FIRST_TOKEN_ID
    next_listing_id: int = FIRST_LISTING_ID
    treasury: int = 0
    next_seq: int = 0
    # Static environment (question bank); config-derived, not event-derived,
    # therefore excluded from the snapshot hash.
    bank: Any = None

    def account(self, account_id: str) -> Account:
        try:
            return self.accounts[account_id]
        except KeyError:
            raise UnknownAccount(f"no such account: {account_id!r}") from None

    def token(self, token_id: int) -> TokenRecord:
        try:
            return self.tokens[token_id]
        except KeyError:
            raise UnknownToken(f"no such token: {token_id!r}") from None


def initial_state(global_seed: int, params: ParamsVersion | None = None, bank: Any = None) -> LedgerState:
    return LedgerState(
        global_seed=global_seed & ((1 << 64) - 1),
        params=params if params is not None else default_params(),
        bank=bank,
    )


# ---------------------------------------------------------------------------
# payload field helpers (events come from untrusted JSON)

def field_str(payload: dict, key: str) -> str:
    value = payload.get(key)
    if not isinstance(value, str):
        raise MalformedPayload(f"field {key!r} must be a string, got {value!r}")
    return value


def field_int(payload: dict, key: str, minimum: int | None = None) -> int:
    value = payload.get(key)
    if not isinstance(value, int) or isinstance(value, bool):
        raise MalformedPayload(f"field {key!r} must be an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise MalformedPayload(f"field {key!r} must be >= {minimum}, got {value}")
    return value


def require_admin(payload: dict) -> None:
    if payload.get("actor") != ADMIN_ACTOR:
        raise NotAdmin("admin credential required")


# ---------------------------------------------------------------------------
# token primitives shared by every game rule

def mint_token(
    state: LedgerState,
    owner: str,
    function: TrigFunction,
    rarity: Rarity,
    variant: int,
    minted_at: int,
) -> TokenRecord:
    state.account(owner)
    record = TokenRecord(
        token_id=state.next_token_id,
        function=function,
        rarity=rarity,
        variant=check_variant(variant),
        owner=owner,
        minted_at=minted_at,
    )
    state.next_token_id += 1
    state.tokens[record.token_id] = record
    return record


def burn_token(state: LedgerState, token_id: int) -> TokenRecord:
    record = state.token(token_id)
    del state.tokens[token_id]
    return record


def transfer_token(state: LedgerState, token_id: int, from_account: str, to_account: str) -> None:
    record = state.token(token_id)
    if record.owner != from_account:
        raise NotOwner(f"token {token_id} is not owned by {from_account!r}")
    if to_account != MARKET_ESCROW:
        state.account(to_account)
    record.owner = to_account


def require_holder(state: LedgerState, token_id: int, actor: str) -> TokenRecord:
    """Token must exist, be out of escrow, and be owned by `actor`."""
    record = state.token(token_id)
    if record.owner == MARKET_ESCROW:
        raise TokenEscrowed(f"token {token_id} is held in market escrow")
    if record.owner != actor:
        raise NotOwner(f"token {token_id} is not owned by {actor!r}")
    return record


# ---------------------------------------------------------------------------
# handler registry and the fold

Handler = Callable[[LedgerState, TransactionEvent], dict]

HANDLERS: dict[str, Handler] = {}


def handler(kind: str) -> Callable[[Handler], Handler]:
    def register(fn: Handler) -> Handler:
        HANDLERS[kind] = fn
        return fn

    return register


def apply_with_result(state: LedgerState, event: TransactionEvent) -> dict:
    """Validate and apply one event, returning the kind-specific result.

    Handlers check every precondition before the first mutation, so when
    this raises, the state is untouched.
    """
    if event.seq != state.next_seq:
        raise SequenceGap(f"expected seq {state.next_seq}, got {event.seq}")
    try:
        fn = HANDLERS[event.kind]
    except KeyError:
        raise UnknownKind(f"unknown event kind: {event.kind!r}") from None
    result = fn(state, event)
    state.next_seq += 1
    return result


def apply_event(state: LedgerState, event: TransactionEvent) -> LedgerState:
    """Fold one event into the state (same object back, advanced by one event)."""
    apply_with_result(state, event)
    return state


def replay(
    events: Iterable[TransactionEvent],
    global_seed: int,
    params: ParamsVersion | None = None,
    bank: Any = None,
) -> LedgerState:
    """Rebuild state by folding a log over genesis; any bad event is CorruptLog."""
    state = initial_state(global_seed, params, bank)
    for event in events:
        try:
            apply_event(state, event)
        except CorruptLog:
            raise
        except EngineError as exc:
            raise CorruptLog(event.seq, f"{exc.code}: {exc}") from exc
    return state


def parse_log_lines(lines: Iterable[str]) -> Iterator[TransactionEvent]:
    """Parse a txlog (one JSON object per line) into events; malformed lines raise CorruptLog."""
    seq = 0
    for line in lines:
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
            event = TransactionEvent(
                seq=raw["seq"],
                kind=raw["kind"],
                payload=raw["payload"],
                wall_clock=raw.get("wall_clock", 0.0),
            )
            if not isinstance(event.seq, int) or not isinstance(event.kind, str) or not isinstance(event.payload, dict):
                raise ValueError("bad field types")
        except (ValueError, KeyError, TypeError) as exc:
            raise CorruptLog(seq, f"unparseable line: {exc}") from exc
        yield event
        seq = event.seq + 1


def new_event(state: LedgerState, kind: str, payload: dict) -> TransactionEvent:
    return TransactionEvent(seq=state.next_seq, kind=kind, payload=payload, wall_clock=time.time())


# ---------------------------------------------------------------------------
# generic event kinds

@handler("CreateAccount")
def _create_account(state: LedgerState, event: TransactionEvent) -> dict:
    account_id = field_str(event.payload, "account")
    secret = field_str(event.payload, "secret")
    if not ACCOUNT_ID_PATTERN.fullmatch(account_id):
        raise InvalidAccountId(
            f"account id must match [a-z0-9_-]{{1,64}}, got {account_id!r}"
        )
    if not 1 <= len(secret) <= MAX_SECRET_LENGTH:
        raise MalformedPayload(f"secret must be 1..{MAX_SECRET_LENGTH} characters")
    if account_id in state.accounts:
        raise AccountExists(f"account {account_id!r} already exists")
    state.accounts[account_id] = Account(account_id=account_id, secret=secret)
    return {"account": account_id}


@handler("Faucet")
def _faucet(state: LedgerState, event: TransactionEvent) -> dict:
    require_admin(event.payload)
    account = state.account(field_str(event.payload, "account"))
    amount = field_int(event.payload, "amount")
    if amount < 1:
        raise InvalidAmount(f"faucet amount must be positive, got {amount}")
    account.currency += amount
    return {"account": account.account_id, "currency": account.currency}


@handler("Mint")
def _mint(state: LedgerState, event: TransactionEvent) -> dict:
    require_admin(event.payload)
    owner = field_str(event.payload, "owner")
    function = TrigFunction.checked(
        field_int(event.payload, "sin_pow"), field_int(event.payload, "cos_pow")
    )
    rarity_level = field_int(event.payload, "rarity")
    if not 0 <= rarity_level < len(Rarity):
        raise MalformedPayload(f"rarity must be in [0, 3], got {rarity_level}")
    variant = field_int(event.payload, "variant")
    check_variant(variant)
    state.account(owner)
    record = mint_token(state, owner, function, Rarity(rarity_level), variant, event.seq)
    return {"token": token_view(record)}


@handler("Burn")
def _burn(state: LedgerState, event: TransactionEvent) -> dict:
    require_admin(event.payload)
    token_id = field_int(event.payload, "token_id")
    record = burn_token(state, token_id)
    return {"token_id": record.token_id}


@handler("Transfer")
def _transfer(state: LedgerState, event: TransactionEvent) -> dict:
    actor = field_str(event.payload, "actor")
    token_id = field_int(event.payload, "token_id")
    to_account = field_str(event.payload, "to")
    require_holder(state, token_id, actor)
    state.account(to_account)
    transfer_token(state, token_id, actor, to_account)
    return {"token_id": token_id, "owner": to_account}


# ---------------------------------------------------------------------------
# views (JSON-safe projections used by the API, CLI and snapshots)

def token_view(record: TokenRecord) -> dict:
    rarity = record.rarity
    return {
        "token_id": record.token_id,
        "sin_pow": record.function.sin_pow,
        "cos_pow": record.function.cos_pow,
        "display_name": display_name(record.function),
        "rarity": rarity.name.lower(),
        "rarity_level": int(rarity),
        "color": rarity.color,
        "variant": record.variant,
        "code": code_or_none(record.function, rarity, record.variant),
        "canonical_key": canonical_key(record.function, rarity, record.variant),
        "owner": record.owner,
        "minted_at": record.minted_at,
    }


def listing_view(state: LedgerState, listing: Listing) -> dict:
    view = {
        "listing_id": listing.listing_id,
        "token_id": listing.token_id,
        "seller": listing.seller,
        "price": listing.price,
        "status": listing.status,
    }
    record = state.tokens.get(listing.token_id)
    view["card"] = token_view(record) if record is not None else None
    return view


def sale_view(sale: SaleRecord) -> dict:
    return {
        "listing_id": sale.listing_id,
        "token_id": sale.token_id,
        "seller": sale.seller,
        "buyer": sale.buyer,
        "price": sale.price,
        "fee_paid": sale.fee_paid,
        "seq": sale.seq,
    }


# ---------------------------------------------------------------------------
# canonical serialization and snapshot hashing

def canonical_state(state: LedgerState) -> dict:
    """Deterministic JSON-safe projection of everything event-derived."""
    return {
        "global_seed": state.global_seed,
        "next_seq": state.next_seq,
        "next_token_id": state.next_token_id,
        "next_listing_id": state.next_listing_id,
        "treasury": state.treasury,
        "accounts": {
            account_id: {"currency": acct.currency, "xp": acct.xp, "secret": acct.secret}
            for account_id, acct in state.accounts.items()
        },
        "tokens": {
            str(token_id): {
                "token_id": record.token_id,
                "sin_pow": record.function.sin_pow,
                "cos_pow": record.function.cos_pow,
                "rarity": int(record.rarity),
                "variant": record.variant,
                "owner": record.owner,
                "minted_at": record.minted_at,
            }
            for token_id, record in state.tokens.items()
        },
        "listings": {
            str(listing_id): {
                "listing_id": listing.listing_id,
                "token_id": listing.token_id,
                "seller": listing.seller,
                "price": listing.price,
                "status": listing.status,
            }
            for listing_id, listing in state.listings.items()
        },
        "sales": [sale_view(sale) for sale in state.sales],
        "answered": {account: sorted(qids) for account, qids in state.answered.items() if qids},
        "params": state.params.to_payload(),
    }


def encode_canonical(value) -> bytes:
    """Type-tagged binary form: fixed-width big-endian scalars, length-prefixed
    strings, map keys ascending.  Identical trees encode to identical bytes on
    every platform."""
    if value is None:
        return b"N"
    if isinstance(value, bool):
        return b"B\x01" if value else b"B\x00"
    if isinstance(value, int):
        return b"I" + value.to_bytes(16, "big", signed=True)
    if isinstance(value, float):
        return b"F" + struct.pack(">d", value)
    if isinstance(value, str):
        raw = value.encode("utf-8")
        return b"S" + struct.pack(">Q", len(raw)) + raw
    if isinstance(value, (list, tuple)):
        return b"L" + struct.pack(">Q", len(value)) + b"".join(encode_canonical(v) for v in value)
    if isinstance(value, dict):
        parts = [b"D", struct.pack(">Q", len(value))]
        for key in sorted(value):
            if not isinstance(key, str):
                raise TypeError(f"non-string map key: {key!r}")
            parts.append(encode_canonical(key))
            parts.append(encode_canonical(value[key]))
        return b"".join(parts)
    raise TypeError(f"cannot canonically encode {type(value)}")


def snapshot_hash(state: LedgerState) -> str:
    return hashlib.sha256(encode_canonical(canonical_state(state))).hexdigest()


def snapshot_hash_excluding_params(state: LedgerState) -> str:
    """Hash of everything except the rule parameters.

    Used to prove a params upgrade left stored state alone; the sequence
    counter is dropped too since the upgrade event itself advances it.
    """
    tree = canonical_state(state)
    del tree["params"]
    del tree["next_seq"]
    return hashlib.sha256(encode_canonical(tree)).hexdigest()
