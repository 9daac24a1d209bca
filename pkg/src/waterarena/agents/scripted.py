"""Deterministic baseline strategies.

Scripted agents clamp to balance instead of retrying: there is nobody to
re-ask. A player whose balance cannot cover a positive bid abstains.
"""

from __future__ import annotations

import math
from typing import Callable

from ..engine import ConfigError
from ..rng import SplitMix64
from .base import Agent, AgentDecision, AgentView

Strategy = Callable[[AgentView], AgentDecision]


def _bid_or_abstain(amount: int, view: AgentView, reason: str) -> AgentDecision:
    amount = min(amount, view.balance)
    if amount < 1:
        return AgentDecision.abstain(reason="insufficient balance")
    return AgentDecision(amount=amount, reason=reason)


def constant(k: int) -> Strategy:
    if k < 1:
        raise ConfigError("constant bid must be positive")

    def strategy(view: AgentView) -> AgentDecision:
        return _bid_or_abstain(k, view, f"constant {k}")

    return strategy


def fraction_of_balance(f: float) -> Strategy:
    if not 0 < f <= 1:
        raise ConfigError("fraction must be in (0, 1]")

    def strategy(view: AgentView) -> AgentDecision:
        return _bid_or_abstain(math.floor(view.balance * f), view, f"fraction {f}")

    return strategy


def desperation() -> Strategy:
    # ceil(balance * (1 + nwd) / 5) in pure integer arithmetic: the bid
    # escalates with the dry streak and reaches the full balance at nwd 4.
    def strategy(view: AgentView) -> AgentDecision:
        amount = (view.balance * (1 + view.no_water_days) + 4) // 5
        return _bid_or_abstain(amount, view, f"desperation nwd={view.no_water_days}")

    return strategy


def random(seed: int) -> Strategy:
    rng = SplitMix64(seed)

    def strategy(view: AgentView) -> AgentDecision:
        if view.balance < 1:
            return AgentDecision.abstain(reason="insufficient balance")
        return AgentDecision(amount=rng.randint(1, view.balance), reason="random")

    return strategy


def make_strategy(spec: str) -> Strategy:
    """Build a strategy from a CLI-style spec.

    Accepted forms: "constant:<k>", "fraction_of_balance:<f>",
    "desperation", "random:<seed>".
    """
    name, _, arg = spec.partition(":")
    try:
        if name == "constant":
            return constant(int(arg))
        if name == "fraction_of_balance":
            return fraction_of_balance(float(arg))
        if name == "desperation":
            if arg:
                raise ConfigError("desperation takes no argument")
            return desperation()
        if name == "random":
            return random(int(arg))
    except ValueError as exc:
        raise ConfigError(f"bad strategy argument in {spec!r}") from exc
    raise ConfigError(f"unknown strategy {name!r}")


class ScriptedAgent(Agent):
    def __init__(self, player_id: str, strategy: Strategy):
        super().__init__(player_id)
        self._strategy = strategy

    def decide(self, view: AgentView) -> AgentDecision:
        return self._strategy(view)
