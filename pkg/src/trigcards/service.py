"""HTTP/JSON boundary: sessions, queries, transaction submission.

Every mutating endpoint funnels into the engine's single-writer submit and
round-trips through exactly one ledger event; GETs only read.  Engine
rejections surface with their machine code: authorization-shaped failures
(NotOwner, NotSeller, NotAdmin) map to 403, missing resources to 404, other
rule violations to 409, malformed requests to 422.

The login flow simulates a wallet connect: an account secret set at
registration buys a bearer session token.  The request model reserves a
`nonce` field so a signature-based handshake can slot in later without a
wire change.
"""

from __future__ import annotations

import json
import secrets
import threading
import time
from hashlib import sha256
from pathlib import Path
from typing import Any

from fastapi import Depends, FastAPI, Header, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, ConfigDict
from starlette.exceptions import HTTPException as StarletteHTTPException

from .contracts import active_listings, preview_combine, sale_history
from .engine import Engine
from .errors import EngineError
from .ledger import ADMIN_ACTOR, listing_view, sale_view, token_view
from .rng import RngStream
from .trivia import next_question

SESSION_TTL_SECONDS = 24 * 60 * 60
SESSION_TOKEN_BYTES = 32

_STATUS_BY_CODE = {
    "BadCredentials": 401,
    "SessionExpired": 401,
    "NotAdmin": 403,
    "NotOwner": 403,
    "NotSeller": 403,
    "UnknownAccount": 404,
    "UnknownToken": 404,
    "UnknownQuestion": 404,
    "MalformedPayload": 422,
    "MalformedCode": 422,
}
_DEFAULT_STATUS = 409


class BadCredentials(EngineError):
    pass


class SessionExpired(EngineError):
    pass


class Session:
    __slots__ = ("account", "token", "issued_at", "expires_at")

    def __init__(self, account: str, ttl: float = SESSION_TTL_SECONDS):
        self.account = account
        self.token = secrets.token_hex(SESSION_TOKEN_BYTES)
        self.issued_at = time.time()
        self.expires_at = self.issued_at + ttl


class SessionStore:
    """In-memory bearer sessions; one account may hold many."""

    def __init__(self, ttl: float = SESSION_TTL_SECONDS):
        self.ttl = ttl
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def issue(self, account: str) -> Session:
        session = Session(account, self.ttl)
        with self._lock:
            self._sessions[session.token] = session
        return session

    def resolve(self, token: str) -> str:
        with self._lock:
            session = self._sessions.get(token)
            if session is None:
                raise BadCredentials("unknown session token")
            if time.time() >= session.expires_at:
                del self._sessions[token]
                raise SessionExpired("session expired; log in again")
            return session.account


def http_status_for(error: EngineError) -> int:
    return _STATUS_BY_CODE.get(error.code, _DEFAULT_STATUS)


class CanonicalJSONResponse(JSONResponse):
    """Stable key order so responses are byte-deterministic."""

    def render(self, content: Any) -> bytes:
        return json.dumps(
            content, sort_keys=True, separators=(",", ":"), ensure_ascii=False
        ).encode("utf-8")


class _Body(BaseModel):
    model_config = ConfigDict(extra="forbid")


class RegisterRequest(_Body):
    account: str
    secret: str


class LoginRequest(_Body):
    account: str
    secret: str
    nonce: str | None = None  # reserved for a future signature handshake


class CombineRequest(_Body):
    token_a: int
    token_b: int
    op: str


class PackPurchaseRequest(_Body):
    pay_with: str  # "currency" | "xp"


class ListingRequest(_Body):
    token_id: int
    price: int


class AnswerRequest(_Body):
    qid: str
    choice_index: int


class FaucetRequest(_Body):
    account: str
    amount: int


def build_app(
    engine: Engine,
    session_ttl: float = SESSION_TTL_SECONDS,
    frontend_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="trigcards", default_response_class=CanonicalJSONResponse)
    sessions = SessionStore(session_ttl)
    admin_secret = engine.config.admin_secret

    @app.exception_handler(EngineError)
    async def engine_error_handler(_request: Request, error: EngineError):
        return CanonicalJSONResponse(
            {"code": error.code, "message": str(error)}, status_code=http_status_for(error)
        )

    @app.exception_handler(RequestValidationError)
    async def validation_handler(_request: Request, error: RequestValidationError):
        return CanonicalJSONResponse(
            {"code": "MalformedRequest", "message": str(error.errors())}, status_code=422
        )

    @app.exception_handler(StarletteHTTPException)
    async def http_error_handler(_request: Request, error: StarletteHTTPException):
        return CanonicalJSONResponse(
            {"code": "HttpError", "message": str(error.detail)}, status_code=error.status_code
        )

    def bearer_token(authorization: str | None = Header(default=None)) -> str:
        if authorization is None or not authorization.startswith("Bearer "):
            raise BadCredentials("missing bearer token")
        return authorization.removeprefix("Bearer ")

    def current_account(token: str = Depends(bearer_token)) -> str:
        return sessions.resolve(token)

    def admin_only(token: str = Depends(bearer_token)) -> str:
        if not secrets.compare_digest(token, admin_secret):
            raise BadCredentials("bad admin credential")
        return ADMIN_ACTOR

    # -- sessions ---------------------------------------------------------

    @app.post("/api/accounts")
    def register(body: RegisterRequest):
        result = engine.submit("CreateAccount", {"account": body.account, "secret": body.secret})
        return {"seq": result["seq"], "account": body.account}

    @app.post("/api/session/login")
    def login(body: LoginRequest):
        with engine.lock:
            account = engine.state.accounts.get(body.account)
            if account is None or not secrets.compare_digest(account.secret, body.secret):
                raise BadCredentials("unknown account or wrong secret")
        session = sessions.issue(body.account)
        return {"token": session.token, "expires_at": session.expires_at}

    # -- public queries ----------------------------------------------------

    @app.get("/api/accounts/{account_id}")
    def get_account(account_id: str):
        with engine.lock:
            account = engine.state.account(account_id)
            return {"currency": account.currency, "xp": account.xp}

    @app.get("/api/accounts/{account_id}/cards")
    def get_cards(account_id: str):
        with engine.lock:
            engine.state.account(account_id)
            return [
                token_view(record)
                for record in sorted(engine.state.tokens.values(), key=lambda r: r.token_id)
                if record.owner == account_id
            ]

    @app.get("/api/tokens/{token_id}")
    def get_token(token_id: int):
        with engine.lock:
            return token_view(engine.state.token(token_id))

    @app.get("/api/combine/preview")
    def combine_preview(a: int = Query(...), b: int = Query(...), op: str = Query(...)):
        with engine.lock:
            return preview_combine(engine.state, a, b, op)

    @app.get("/api/marketplace/listings")
    def marketplace_listings(status: str = Query(default="active")):
        with engine.lock:
            if status == "active":
                rows = active_listings(engine.state)
            elif status == "all":
                rows = list(engine.state.listings.values())
            else:
                rows = [l for l in engine.state.listings.values() if l.status == status]
            return [listing_view(engine.state, row) for row in sorted(rows, key=lambda l: l.listing_id)]

    @app.get("/api/marketplace/history")
    def marketplace_history(token_id: int | None = Query(default=None), account: str | None = Query(default=None)):
        with engine.lock:
            return [sale_view(s) for s in sale_history(engine.state, token_id=token_id, account=account)]

    # -- authenticated transactions -----------------------------------------

    @app.post("/api/combine")
    def combine(body: CombineRequest, account: str = Depends(current_account)):
        result = engine.submit(
            "Combine",
            {"actor": account, "token_a": body.token_a, "token_b": body.token_b, "op": body.op},
        )
        return {"seq": result["seq"], "new_token": result["new_token"], "burned": result["burned"]}

    @app.post("/api/packs/purchase")
    def purchase_pack(body: PackPurchaseRequest, account: str = Depends(current_account)):
        if body.pay_with == "currency":
            kind = "BuyPack"
        elif body.pay_with == "xp":
            kind = "XpBuyPack"
        else:
            return CanonicalJSONResponse(
                {"code": "MalformedRequest", "message": "pay_with must be 'currency' or 'xp'"},
                status_code=422,
            )
        result = engine.submit(kind, {"actor": account})
        return {"seq": result["seq"], "tokens": result["tokens"]}

    @app.post("/api/tokens/{token_id}/upgrade")
    def upgrade_token(token_id: int, account: str = Depends(current_account)):
        result = engine.submit("UpgradeCard", {"actor": account, "token_id": token_id})
        return {"seq": result["seq"], "new_token": result["new_token"]}

    @app.post("/api/marketplace/listings")
    def create_listing(body: ListingRequest, account: str = Depends(current_account)):
        result = engine.submit(
            "List", {"actor": account, "token_id": body.token_id, "price": body.price}
        )
        return {"seq": result["seq"], "listing_id": result["listing"]["listing_id"]}

    @app.post("/api/marketplace/listings/{listing_id}/purchase")
    def purchase_listing(listing_id: int, account: str = Depends(current_account)):
        result = engine.submit("Purchase", {"actor": account, "listing_id": listing_id})
        return {"seq": result["seq"], "sale_record": result["sale"]}

    @app.post("/api/marketplace/listings/{listing_id}/cancel")
    def cancel_listing(listing_id: int, account: str = Depends(current_account)):
        result = engine.submit("CancelListing", {"actor": account, "listing_id": listing_id})
        return {"seq": result["seq"]}

    # -- trivia -------------------------------------------------------------

    @app.get("/api/trivia/next")
    def trivia_next(account: str = Depends(current_account)):
        with engine.lock:
            # deterministic per (seed, account, questions answered): stable until
            # the player answers something new, then it moves on
            answered = len(engine.state.answered.get(account, ()))
            digest = sha256(f"trivia:{account}:{answered}".encode()).digest()
            stream = RngStream(engine.state.global_seed ^ int.from_bytes(digest[:8], "big"))
            return next_question(engine.state, account, stream).public_view()

    @app.post("/api/trivia/answer")
    def trivia_answer(body: AnswerRequest, account: str = Depends(current_account)):
        result = engine.submit(
            "AnswerQuestion",
            {"actor": account, "qid": body.qid, "choice_index": body.choice_index},
        )
        return {
            "seq": result["seq"],
            "correct": result["correct"],
            "xp_awarded": result["xp_awarded"],
            "new_xp": result["new_xp"],
        }

    # -- admin ---------------------------------------------------------------

    @app.post("/api/admin/params")
    def admin_params(body: dict, actor: str = Depends(admin_only)):
        result = engine.submit("UpgradeParams", {"actor": actor, "params": body})
        return {"seq": result["seq"], "version": result["version"]}

    @app.post("/api/admin/faucet")
    def admin_faucet(body: FaucetRequest, actor: str = Depends(admin_only)):
        result = engine.submit(
            "Faucet", {"actor": actor, "account": body.account, "amount": body.amount}
        )
        return {"seq": result["seq"]}

    if frontend_dir is not None and Path(frontend_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(frontend_dir), html=True), name="webui")

    return app
