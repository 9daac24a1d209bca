import pytest
from hypothesis import given, strategies as st

from waterarena.engine import ConfigError
from waterarena.agents import ScriptedAgent, make_strategy
from waterarena.agents.base import AgentView
from waterarena.agents.scripted import constant, desperation, fraction_of_balance, random


def view(balance: int, nwd: int = 0, day: int = 1) -> AgentView:
    return AgentView(
        player_id="alex",
        name="Alex",
        day=day,
        supply=15,
        hp=8,
        balance=balance,
        no_water_days=nwd,
    )


def test_constant_clamps_to_balance():
    strategy = constant(100)
    assert strategy(view(balance=70)).amount == 70
    assert strategy(view(balance=500)).amount == 100
    assert strategy(view(balance=0)).is_abstain


def test_fraction_of_balance_floors():
    strategy = fraction_of_balance(0.5)
    assert strategy(view(balance=240)).amount == 120
    assert strategy(view(balance=241)).amount == 120
    assert strategy(view(balance=1)).is_abstain


def test_desperation_examples():
    strategy = desperation()
    assert strategy(view(balance=100, nwd=0)).amount == 20
    assert strategy(view(balance=100, nwd=3)).amount == 80
    assert strategy(view(balance=100, nwd=4)).amount == 100
    assert strategy(view(balance=0, nwd=3)).is_abstain


@given(balance=st.integers(2, 10_000))
def test_desperation_monotone_in_dry_streak(balance):
    strategy = desperation()
    low = strategy(view(balance=balance, nwd=0)).amount
    high = strategy(view(balance=balance, nwd=3)).amount
    assert low is not None and high is not None
    assert high > low
    assert high <= balance


@given(balance=st.integers(0, 10_000), nwd=st.integers(0, 10))
def test_scripted_never_exceeds_balance(balance, nwd):
    for strategy in (constant(250), fraction_of_balance(0.8), desperation(), random(3)):
        decision = strategy(view(balance=balance, nwd=nwd))
        if not decision.is_abstain:
            assert 1 <= decision.amount <= balance


def test_random_strategy_reproducible():
    views = [view(balance=b) for b in (50, 400, 3, 999)]
    first = [random(42)(v).amount for v in views]
    second = [random(42)(v).amount for v in views]
    assert first == second
    assert first != [random(43)(v).amount for v in views]


def test_make_strategy_forms():
    assert make_strategy("constant:100")(view(70)).amount == 70
    assert make_strategy("fraction_of_balance:0.5")(view(240)).amount == 120
    assert make_strategy("desperation")(view(100, nwd=3)).amount == 80
    assert make_strategy("random:7")(view(100)).amount == make_strategy("random:7")(
        view(100)
    ).amount


@pytest.mark.parametrize(
    "bad", ["constant", "constant:x", "fraction_of_balance:1.5", "desperation:9", "mystery:1"]
)
def test_make_strategy_rejects(bad):
    with pytest.raises(ConfigError):
        make_strategy(bad)


def test_scripted_agent_delegates():
    agent = ScriptedAgent("alex", constant(60))
    assert agent.decide(view(balance=80)).amount == 60
    agent.observe_round(1, "announcement", "info")  # accepted and ignored
