import json
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from waterarena.agents.base import AgentDecision
from waterarena.agents.parsing import ParseFailure, parse_decision

CORPUS = json.loads(
    (Path(__file__).parent / "fixtures" / "parser_corpus.json").read_text()
)["cases"]


def outcome_kind(result):
    if isinstance(result, ParseFailure):
        return "retry"
    assert isinstance(result, AgentDecision)
    return "abstain" if result.is_abstain else "bid"


@pytest.mark.parametrize("case", CORPUS, ids=[c["id"] for c in CORPUS])
def test_corpus_case(case):
    result = parse_decision(case["raw"], case["balance"])
    assert outcome_kind(result) == case["expect"]["kind"]
    if case["expect"]["kind"] == "bid":
        assert result.amount == case["expect"]["amount"]
        assert result.raw_response == case["raw"]


def test_corpus_has_fifty_labeled_cases():
    assert len(CORPUS) == 50
    assert len({c["id"] for c in CORPUS}) == 50


def test_amounts_never_exceed_balance_in_corpus():
    for case in CORPUS:
        if case["expect"]["kind"] == "bid":
            assert case["expect"]["amount"] <= case["balance"]


@given(text=st.text(max_size=400), balance=st.integers(0, 10_000))
def test_parser_is_total(text, balance):
    result = parse_decision(text, balance)
    assert isinstance(result, (AgentDecision, ParseFailure))
    if isinstance(result, AgentDecision) and not result.is_abstain:
        assert 1 <= result.amount <= balance
