import pytest

from waterarena.engine import config_for_abundance, default_roster
from waterarena.gateway import ChatGateway, GatewayError, RateLimited
from waterarena.agents.base import AgentView
from waterarena.agents.llm import LLMAgent

ROSTER = default_roster()
CONFIG = config_for_abundance("low", ROSTER, seed=0)


class ScriptedTransport:
    """Returns queued responses and keeps every request for inspection."""

    def __init__(self, responses):
        self.responses = list(responses)
        self.requests = []

    def __call__(self, request):
        self.requests.append(request)
        if not self.responses:
            raise AssertionError("transport exhausted")
        item = self.responses.pop(0)
        if isinstance(item, Exception):
            raise item
        return item


def agent_with(responses, player="eric"):
    transport = ScriptedTransport(responses)
    gateway = ChatGateway("live", transport=transport, sleeper=lambda _: None)
    spec = next(s for s in ROSTER if s.id == player)
    return LLMAgent(spec, CONFIG, gateway, model="test-model"), transport


def view(day=1, supply=19, hp=8, balance=840, nwd=0, player="eric", name="Eric"):
    return AgentView(
        player_id=player,
        name=name,
        day=day,
        supply=supply,
        hp=hp,
        balance=balance,
        no_water_days=nwd,
    )


def test_clean_response_parsed_on_first_try():
    agent, transport = agent_with(["I will bid $300 to stay alive."])
    decision = agent.decide(view())
    assert decision.amount == 300
    assert decision.raw_response == "I will bid $300 to stay alive."
    assert len(transport.requests) == 1
    messages = transport.requests[0].messages
    assert messages[0].role == "system"
    assert "Water Allocation Challenge" in messages[0].content
    assert messages[-1].role == "user"
    assert "Day 1" in messages[-1].content


def test_unaffordable_bid_retried_with_corrective_message():
    agent, transport = agent_with(["I bid $2000.", "Fine, I bid $500."])
    decision = agent.decide(view(balance=840))
    assert decision.amount == 500
    assert len(transport.requests) == 2
    retry = transport.requests[1].messages
    assert retry[-2].role == "assistant"
    assert retry[-2].content == "I bid $2000."
    assert retry[-1].role == "user"
    assert "could not be accepted" in retry[-1].content
    assert "exceeds balance" in retry[-1].content
    assert transport.requests[1].request_tag.attempt == 1


def test_two_failed_retries_become_unparseable_abstain():
    agent, transport = agent_with(["no numbers here", "still nothing", "nope"])
    decision = agent.decide(view())
    assert decision.is_abstain
    assert decision.reason == "unparseable"
    assert decision.raw_response == "nope"
    assert len(transport.requests) == 3


def test_refusal_becomes_abstain_without_retry():
    agent, transport = agent_with(["I will sit out today."])
    decision = agent.decide(view())
    assert decision.is_abstain
    assert decision.reason == "declined"
    assert len(transport.requests) == 1


def test_gateway_failure_becomes_abstain():
    responses = [RateLimited()] * 5
    transport = ScriptedTransport(responses)
    gateway = ChatGateway("live", transport=transport, sleeper=lambda _: None)
    spec = next(s for s in ROSTER if s.id == "eric")
    agent = LLMAgent(spec, CONFIG, gateway, model="test-model")
    decision = agent.decide(view())
    assert decision.is_abstain
    assert decision.reason == "gateway failure"


def test_transcript_grows_and_context_follows_shape():
    agent, transport = agent_with(["I bid $100.", "I bid $150."])
    agent.decide(view(day=1))
    agent.observe_round(1, "announcement day 1", "info day 1")
    agent.decide(view(day=2))
    second = transport.requests[1].messages
    assert len(second) == 2 + 3 * 1
    assert [m.role for m in second] == ["system", "assistant", "user", "user", "user"]
    assert second[1].content == "I bid $100."
    assert second[2].content == "announcement day 1"
    assert second[3].content == "info day 1"


def test_only_final_response_of_round_enters_transcript():
    agent, transport = agent_with(["gibberish", "I bid $80.", "I bid $90."])
    agent.decide(view(day=1))
    agent.observe_round(1, "b1", "i1")
    agent.decide(view(day=2))
    second_round_messages = transport.requests[-1].messages
    assert second_round_messages[1].content == "I bid $80."
    assert all("gibberish" not in m.content for m in second_round_messages)
