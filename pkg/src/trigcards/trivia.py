"""Trivia backend: question bank, deterministic selection, XP awards.

Questions are static content loaded once at startup; which ones an account
has already answered correctly is ledger state, so XP awards replay exactly
and a question can never be farmed twice.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .errors import (
    BadAnswerIndex,
    BadChoice,
    DuplicateQid,
    EmptyBank,
    ParseError,
    UnknownQuestion,
)
from .ledger import LedgerState, TransactionEvent, field_int, field_str, handler
from .rng import RngStream

DIFFICULTIES = ("Easy", "Medium", "Hard")
DEFAULT_XP_REWARD = {"Easy": 10, "Medium": 20, "Hard": 30}

MIN_CHOICES = 2
MAX_CHOICES = 6


@dataclass(frozen=True)
class Question:
    qid: str
    prompt: str
    choices: tuple[str, ...]
    answer_index: int
    difficulty: str
    xp_reward: int

    def public_view(self) -> dict:
        """The question as shown to players: no answer index."""
        return {
            "qid": self.qid,
            "prompt": self.prompt,
            "choices": list(self.choices),
            "difficulty": self.difficulty,
            "xp_reward": self.xp_reward,
        }


class QuestionBank:
    def __init__(self, questions: list[Question]):
        self.questions = list(questions)
        self.by_qid = {q.qid: q for q in self.questions}

    def __len__(self) -> int:
        return len(self.questions)

    def question(self, qid: str) -> Question:
        try:
            return self.by_qid[qid]
        except KeyError:
            raise UnknownQuestion(f"no such question: {qid!r}") from None


def _parse_question(index: int, raw) -> Question:
    if not isinstance(raw, dict):
        raise ParseError(f"question {index}: entry must be an object")
    try:
        qid = raw["qid"]
        prompt = raw["prompt"]
        choices = raw["choices"]
        answer_index = raw["answer_index"]
        difficulty = raw["difficulty"]
    except KeyError as exc:
        raise ParseError(f"question {index}: missing field {exc.args[0]!r}") from None
    if not isinstance(qid, str) or not qid:
        raise ParseError(f"question {index}: qid must be a nonempty string")
    if not isinstance(prompt, str) or not prompt:
        raise ParseError(f"question {index}: prompt must be a nonempty string")
    if (
        not isinstance(choices, list)
        or not MIN_CHOICES <= len(choices) <= MAX_CHOICES
        or not all(isinstance(c, str) and c for c in choices)
    ):
        raise ParseError(
            f"question {index}: choices must be {MIN_CHOICES}..{MAX_CHOICES} nonempty strings"
        )
    if difficulty not in DIFFICULTIES:
        raise ParseError(f"question {index}: difficulty must be one of {DIFFICULTIES}")
    if not isinstance(answer_index, int) or isinstance(answer_index, bool) or not 0 <= answer_index < len(choices):
        raise BadAnswerIndex(f"question {index} ({qid}): answer_index {answer_index!r} out of range")
    xp_reward = raw.get("xp_reward", DEFAULT_XP_REWARD[difficulty])
    if not isinstance(xp_reward, int) or isinstance(xp_reward, bool) or xp_reward < 1:
        raise ParseError(f"question {index} ({qid}): xp_reward must be a positive integer")
    return Question(
        qid=qid,
        prompt=prompt,
        choices=tuple(choices),
        answer_index=answer_index,
        difficulty=difficulty,
        xp_reward=xp_reward,
    )


def load_questions(source) -> QuestionBank:
    """Build a validated bank from a JSON array (path, JSON text, or parsed list)."""
    if isinstance(source, (str, Path)):
        path = Path(source)
        if path.exists():
            text = path.read_text(encoding="utf-8")
        else:
            text = str(source)
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"question file is not valid JSON: {exc}") from exc
    else:
        data = source
    if not isinstance(data, list):
        raise ParseError("question file must be a JSON array of question objects")
    questions = []
    seen: set[str] = set()
    for index, raw in enumerate(data):
        question = _parse_question(index, raw)
        if question.qid in seen:
            raise DuplicateQid(f"duplicate qid {question.qid!r}")
        seen.add(question.qid)
        questions.append(question)
    return QuestionBank(questions)


def default_question_file() -> Path:
    return Path(__file__).parent / "data" / "questions.json"


def load_default_bank() -> QuestionBank:
    return load_questions(default_question_file())


def next_question(state: LedgerState, account: str, stream: RngStream) -> Question:
    """Uniform draw over questions the account has not answered correctly;
    once every question is used up, draw over the whole bank."""
    bank: QuestionBank | None = state.bank
    if bank is None or len(bank) == 0:
        raise EmptyBank("no questions loaded")
    answered = state.answered.get(account, set())
    candidates = [q for q in bank.questions if q.qid not in answered]
    if not candidates:
        candidates = bank.questions
    return candidates[stream.next_u64() % len(candidates)]


@handler("AnswerQuestion")
def _answer_question(state: LedgerState, event: TransactionEvent) -> dict:
    actor = field_str(event.payload, "actor")
    qid = field_str(event.payload, "qid")
    choice_index = field_int(event.payload, "choice_index")
    bank: QuestionBank | None = state.bank
    if bank is None:
        raise EmptyBank("no questions loaded")
    question = bank.question(qid)
    if not 0 <= choice_index < len(question.choices):
        raise BadChoice(
            f"choice_index {choice_index} out of range for {len(question.choices)} choices"
        )
    account = state.account(actor)
    correct = choice_index == question.answer_index
    already_awarded = qid in state.answered.get(actor, set())
    xp_awarded = 0
    if correct and not already_awarded:
        xp_awarded = question.xp_reward
        account.xp += xp_awarded
        state.answered.setdefault(actor, set()).add(qid)
    return {
        "correct": correct,
        "xp_awarded": xp_awarded,
        "new_xp": account.xp,
    }
