import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from trigcards import Engine, EngineConfig
from trigcards.ledger import ADMIN_ACTOR


@pytest.fixture
def engine() -> Engine:
    """Fresh in-memory engine with the default config (global seed 42)."""
    return Engine(EngineConfig())


@pytest.fixture
def funded_engine(engine: Engine) -> Engine:
    """Engine with alice and bob registered and faucetted 10_000 currency each."""
    for name in ("alice", "bob"):
        engine.submit("CreateAccount", {"account": name, "secret": f"{name}-pw"})
        engine.submit("Faucet", {"actor": ADMIN_ACTOR, "account": name, "amount": 10_000})
    return engine


def give_xp(engine: Engine, account: str, at_least: int) -> int:
    """Earn XP for `account` by answering bank questions correctly."""
    bank = engine.bank
    total = 0
    for question in bank.questions:
        if total >= at_least:
            break
        result = engine.submit(
            "AnswerQuestion",
            {"actor": account, "qid": question.qid, "choice_index": question.answer_index},
        )
        total = result["new_xp"]
    if total < at_least:
        raise AssertionError(f"bank exhausted at {total} XP < {at_least}")
    return total
