"""Deterministic trig-function trading-card engine.

Cards are sin/cos monomials players combine by multiplication or division;
combining burns the inputs and mints the result with a rarity drawn from a
versioned probability table.  Everything runs on an event-sourced ledger
whose log replays bit-exactly, exposed over an HTTP/JSON API and a CLI.
"""

from . import contracts, trivia  # noqa: F401  (registers their event handlers)
from .algebra import Rarity, TrigFunction
from .config import EngineConfig
from .engine import Engine
from .errors import EngineError
from .ledger import LedgerState, TransactionEvent, replay, snapshot_hash

__all__ = [
    "Engine",
    "EngineConfig",
    "EngineError",
    "LedgerState",
    "Rarity",
    "TransactionEvent",
    "TrigFunction",
    "contracts",
    "replay",
    "snapshot_hash",
    "trivia",
]

__version__ = "0.1.0"
