"""Common agent interface: one decision per living player per day."""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class AgentView:
    """Everything a player may legitimately see when asked to bid.

    Carries only the player's own status plus public day facts; other
    players' current-day decisions never appear here (sealed bids).
    """

    player_id: str
    name: str
    day: int
    supply: int
    hp: int
    balance: int
    no_water_days: int


@dataclass(frozen=True)
class AgentDecision:
    """A bid amount (positive, at most the balance) or an abstention."""

    amount: Optional[int]
    reason: str = ""
    raw_response: str = ""

    @property
    def is_abstain(self) -> bool:
        return self.amount is None

    @classmethod
    def abstain(cls, reason: str, raw_response: str = "") -> "AgentDecision":
        return cls(amount=None, reason=reason, raw_response=raw_response)


class Agent(ABC):
    """Produces one decision per day; observes public results afterwards."""

    def __init__(self, player_id: str):
        self.player_id = player_id

    @abstractmethod
    def decide(self, view: AgentView) -> AgentDecision:
        ...

    def observe_round(self, day: int, announcement: str, participants_info: str) -> None:
        """Receive the public post-auction information for a finished day."""
