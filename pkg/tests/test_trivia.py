"""Trivia: bank loading, selection policy, grading, XP awards."""

import json

import pytest

from trigcards.errors import (
    BadAnswerIndex,
    BadChoice,
    DuplicateQid,
    EmptyBank,
    ParseError,
    UnknownAccount,
    UnknownQuestion,
)
from trigcards.ledger import Account, TransactionEvent, apply_with_result, initial_state
from trigcards.rng import RngStream
from trigcards.trivia import (
    QuestionBank,
    load_default_bank,
    load_questions,
    next_question,
)


def question_dict(qid="q1", **overrides):
    base = {
        "qid": qid,
        "prompt": "What is sin(0)?",
        "choices": ["0", "1"],
        "answer_index": 0,
        "difficulty": "Easy",
    }
    base.update(overrides)
    return base


def submit(state, kind, payload):
    return apply_with_result(state, TransactionEvent(state.next_seq, kind, payload, 0.0))


@pytest.fixture
def bank_state():
    state = initial_state(42)
    state.bank = load_questions([question_dict("q1"), question_dict("q2", difficulty="Medium")])
    state.accounts["alice"] = Account(account_id="alice", secret="pw")
    return state


class TestLoadQuestions:
    def test_valid_file(self, tmp_path):
        path = tmp_path / "q.json"
        path.write_text(json.dumps([question_dict(f"q{i}") for i in range(10)]))
        assert len(load_questions(path)) == 10

    def test_duplicate_qid(self):
        with pytest.raises(DuplicateQid):
            load_questions([question_dict("dup"), question_dict("dup")])

    def test_answer_index_out_of_range(self):
        with pytest.raises(BadAnswerIndex):
            load_questions([question_dict(answer_index=5)])

    def test_not_json(self, tmp_path):
        path = tmp_path / "q.json"
        path.write_text("[{ this is not json")
        with pytest.raises(ParseError):
            load_questions(path)

    def test_not_an_array(self):
        with pytest.raises(ParseError):
            load_questions({"qid": "x"})

    @pytest.mark.parametrize(
        "broken",
        [
            question_dict(choices=["only-one"]),
            question_dict(choices=[str(i) for i in range(7)]),
            question_dict(difficulty="Expert"),
            question_dict(prompt=""),
            question_dict(xp_reward=0),
            {"prompt": "missing qid", "choices": ["a", "b"], "answer_index": 0, "difficulty": "Easy"},
        ],
    )
    def test_schema_violations(self, broken):
        with pytest.raises(ParseError):
            load_questions([broken])

    def test_default_rewards_by_difficulty(self):
        bank = load_questions(
            [
                question_dict("e", difficulty="Easy"),
                question_dict("m", difficulty="Medium"),
                question_dict("h", difficulty="Hard"),
                question_dict("custom", difficulty="Easy", xp_reward=77),
            ]
        )
        rewards = {q.qid: q.xp_reward for q in bank.questions}
        assert rewards == {"e": 10, "m": 20, "h": 30, "custom": 77}

    def test_bundled_bank(self):
        bank = load_default_bank()
        assert len(bank) == 20
        assert all(0 <= q.answer_index < len(q.choices) for q in bank.questions)


class TestNextQuestion:
    def test_single_question_bank(self, bank_state):
        bank_state.bank = load_questions([question_dict("only")])
        for seed in range(5):
            assert next_question(bank_state, "alice", RngStream(seed)).qid == "only"

    def test_deterministic_for_fixed_seed(self, bank_state):
        a = next_question(bank_state, "alice", RngStream(9)).qid
        b = next_question(bank_state, "alice", RngStream(9)).qid
        assert a == b

    def test_correctly_answered_excluded_until_exhaustion(self, bank_state):
        submit(bank_state, "AnswerQuestion", {"actor": "alice", "qid": "q1", "choice_index": 0})
        for seed in range(10):
            assert next_question(bank_state, "alice", RngStream(seed)).qid == "q2"
        submit(bank_state, "AnswerQuestion", {"actor": "alice", "qid": "q2", "choice_index": 0})
        seen = {next_question(bank_state, "alice", RngStream(seed)).qid for seed in range(30)}
        assert seen == {"q1", "q2"}

    def test_empty_bank(self, bank_state):
        bank_state.bank = QuestionBank([])
        with pytest.raises(EmptyBank):
            next_question(bank_state, "alice", RngStream(0))


class TestSubmitAnswer:
    def test_correct_awards_xp(self, bank_state):
        result = submit(bank_state, "AnswerQuestion", {"actor": "alice", "qid": "q1", "choice_index": 0})
        assert result == {"correct": True, "xp_awarded": 10, "new_xp": 10}

    def test_medium_reward(self, bank_state):
        result = submit(bank_state, "AnswerQuestion", {"actor": "alice", "qid": "q2", "choice_index": 0})
        assert result["xp_awarded"] == 20

    def test_wrong_answer_no_xp(self, bank_state):
        result = submit(bank_state, "AnswerQuestion", {"actor": "alice", "qid": "q1", "choice_index": 1})
        assert result == {"correct": False, "xp_awarded": 0, "new_xp": 0}
        assert "alice" not in bank_state.answered

    def test_no_repeat_rewards(self, bank_state):
        submit(bank_state, "AnswerQuestion", {"actor": "alice", "qid": "q1", "choice_index": 0})
        repeat = submit(bank_state, "AnswerQuestion", {"actor": "alice", "qid": "q1", "choice_index": 0})
        assert repeat == {"correct": True, "xp_awarded": 0, "new_xp": 10}

    def test_wrong_then_right_still_awards(self, bank_state):
        submit(bank_state, "AnswerQuestion", {"actor": "alice", "qid": "q1", "choice_index": 1})
        result = submit(bank_state, "AnswerQuestion", {"actor": "alice", "qid": "q1", "choice_index": 0})
        assert result["xp_awarded"] == 10

    def test_unknown_question(self, bank_state):
        with pytest.raises(UnknownQuestion):
            submit(bank_state, "AnswerQuestion", {"actor": "alice", "qid": "nope", "choice_index": 0})

    def test_bad_choice(self, bank_state):
        with pytest.raises(BadChoice):
            submit(bank_state, "AnswerQuestion", {"actor": "alice", "qid": "q1", "choice_index": 7})

    def test_unknown_account(self, bank_state):
        with pytest.raises(UnknownAccount):
            submit(bank_state, "AnswerQuestion", {"actor": "ghost", "qid": "q1", "choice_index": 0})

    def test_public_view_hides_answer(self, bank_state):
        view = bank_state.bank.question("q1").public_view()
        assert "answer_index" not in view
        assert view["choices"] == ["0", "1"]
