"""Deterministic state machine for the water-auction survival game.

One game day runs: credit salaries -> announce sampled supply -> collect one
sealed bid (or abstention) per living player -> allocate by highest bidder
with ties broken toward lower requirement -> settle health, balances and
eliminations. Everything here is a pure function of (state, inputs); the
`Game` wrapper only threads state between days.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, Optional, Sequence

from .rng import SplitMix64

HP_START = 8
HP_MAX = 10
WATER_GAIN = 2
DEFAULT_DAYS = 20

# Supply bounds for the three resource-abundance conditions.
ABUNDANCE_BOUNDS = {
    "low": (10, 20),
    "medium": (15, 25),
    "high": (20, 30),
}


class ConfigError(ValueError):
    """Invalid game configuration."""


class ProtocolError(ValueError):
    """A bid stream violated the game protocol (duplicate, dead, overdrawn...)."""


class InvariantError(AssertionError):
    """Internal bookkeeping contradiction; indicates an engine bug."""


@dataclass(frozen=True)
class PersonaText:
    """Optional behavioral profile: all three sections must be non-empty."""

    profession: str
    personality: str
    background: str

    def __post_init__(self) -> None:
        for part in ("profession", "personality", "background"):
            if not getattr(self, part).strip():
                raise ConfigError(f"persona {part} must be non-empty")


@dataclass(frozen=True)
class PlayerSpec:
    """Immutable player identity: daily water need and daily income."""

    id: str
    name: str
    requirement: int
    salary: int
    persona: Optional[PersonaText] = None

    def __post_init__(self) -> None:
        if self.requirement < 1:
            raise ConfigError(f"{self.id}: requirement must be >= 1")
        if self.salary < 1:
            raise ConfigError(f"{self.id}: salary must be >= 1")


def default_roster() -> tuple[PlayerSpec, ...]:
    """The canonical five-resident roster."""
    return (
        PlayerSpec("alex", "Alex", requirement=8, salary=70),
        PlayerSpec("bob", "Bob", requirement=9, salary=75),
        PlayerSpec("cindy", "Cindy", requirement=10, salary=100),
        PlayerSpec("david", "David", requirement=11, salary=120),
        PlayerSpec("eric", "Eric", requirement=12, salary=120),
    )


@dataclass(frozen=True)
class PlayerState:
    """Mutable per-day status, carried between rounds as fresh copies."""

    hp: int = HP_START
    balance: int = 0
    no_water_days: int = 0
    alive: bool = True


@dataclass(frozen=True)
class GameConfig:
    roster: tuple[PlayerSpec, ...]
    seed: int
    days: int = DEFAULT_DAYS
    hp_start: int = HP_START
    hp_max: int = HP_MAX
    water_gain: int = WATER_GAIN
    supply_low: int = 10
    supply_high: int = 20
    # Sensitivity switch: stop the allocation walk at the first bidder whose
    # requirement no longer fits, instead of skipping past them.
    stop_at_first_misfit: bool = False

    def __post_init__(self) -> None:
        if self.days < 1:
            raise ConfigError("days must be >= 1")
        if not self.roster:
            raise ConfigError("roster must be non-empty")
        if not (1 <= self.supply_low <= self.supply_high):
            raise ConfigError("need 1 <= supply_low <= supply_high")
        ids = [spec.id for spec in self.roster]
        if len(set(ids)) != len(ids):
            raise ConfigError("player ids must be unique")
        if self.hp_start > self.hp_max:
            raise ConfigError("hp_start exceeds hp_max")

    def spec(self, player_id: str) -> PlayerSpec:
        for candidate in self.roster:
            if candidate.id == player_id:
                return candidate
        raise KeyError(player_id)

    @property
    def requirements(self) -> dict[str, int]:
        return {spec.id: spec.requirement for spec in self.roster}


def config_for_abundance(
    abundance: str,
    roster: Sequence[PlayerSpec],
    seed: int,
    **overrides,
) -> GameConfig:
    low, high = ABUNDANCE_BOUNDS[abundance.lower()]
    return GameConfig(
        roster=tuple(roster), seed=seed, supply_low=low, supply_high=high, **overrides
    )


@dataclass(frozen=True)
class Bid:
    """One sealed submission; amount None means the player abstained."""

    player_id: str
    amount: Optional[int]
    reason: str = ""

    @property
    def is_abstain(self) -> bool:
        return self.amount is None


@dataclass(frozen=True)
class RoundRecord:
    day: int
    supply: int
    bids: tuple[Bid, ...]
    winners: tuple[tuple[str, int], ...]
    hp_after: dict[str, int]
    nwd_after: dict[str, int]
    balance_after: dict[str, int]
    eliminated: tuple[str, ...]
    min_successful_bid: Optional[int]


@dataclass
class GameRecord:
    config: GameConfig
    rounds: list[RoundRecord]
    final_states: dict[str, PlayerState]
    schema_version: int = 1


def sample_supply(rng: SplitMix64, config: GameConfig) -> int:
    """Draw today's supply from the configured discrete uniform range."""
    return rng.randint(config.supply_low, config.supply_high)


def allocate(
    bids: Sequence[Bid],
    requirements: Mapping[str, int],
    supply: int,
    stop_at_first_misfit: bool = False,
) -> list[tuple[str, int]]:
    """Sorted walk over validated bids; winners get exactly their requirement.

    Order: amount descending, requirement ascending, then player id so the
    result is a total deterministic order. A bidder whose requirement exceeds
    the remaining supply is skipped and the walk continues (unless the
    stop-at-first-misfit variant is selected). Partial fills never occur.
    """
    seen: set[str] = set()
    for bid in bids:
        if bid.player_id in seen:
            raise ProtocolError(f"duplicate bid from {bid.player_id}")
        seen.add(bid.player_id)
        if bid.amount is None or bid.amount < 1:
            raise ProtocolError(f"{bid.player_id}: bid amount must be a positive integer")
        if bid.player_id not in requirements:
            raise ProtocolError(f"unknown bidder {bid.player_id}")

    order = sorted(
        bids, key=lambda b: (-b.amount, requirements[b.player_id], b.player_id)
    )
    winners: list[tuple[str, int]] = []
    remaining = supply
    for bid in order:
        need = requirements[bid.player_id]
        if need <= remaining:
            winners.append((bid.player_id, bid.amount))
            remaining -= need
        elif stop_at_first_misfit:
            break
    return winners


def credit_salaries(
    states: Mapping[str, PlayerState], roster: Sequence[PlayerSpec]
) -> dict[str, PlayerState]:
    """Start-of-day income: living players earn their salary, the dead earn nothing."""
    out: dict[str, PlayerState] = {}
    for spec in roster:
        state = states[spec.id]
        if state.alive:
            out[spec.id] = replace(state, balance=state.balance + spec.salary)
        else:
            out[spec.id] = state
    return out


def settle_round(
    states: Mapping[str, PlayerState],
    winners: Sequence[tuple[str, int]],
    roster: Sequence[PlayerSpec],
    hp_max: int = HP_MAX,
    water_gain: int = WATER_GAIN,
) -> tuple[dict[str, PlayerState], list[str]]:
    """Apply a day's outcome and return (new states, eliminated ids).

    Winners pay their bid, gain health (capped) and reset their dry streak.
    Every other living player's streak grows by one and costs that many
    health points. Deaths settle after all updates, so several players can
    fall on the same day; an eliminated player's money is reset to zero.
    """
    payments = dict(winners)
    out: dict[str, PlayerState] = {}
    eliminated: list[str] = []
    for spec in roster:
        state = states[spec.id]
        if not state.alive:
            out[spec.id] = state
            continue
        if spec.id in payments:
            payment = payments[spec.id]
            if payment > state.balance:
                raise InvariantError(
                    f"{spec.id} owes {payment} with balance {state.balance}"
                )
            state = replace(
                state,
                balance=state.balance - payment,
                hp=min(state.hp + water_gain, hp_max),
                no_water_days=0,
            )
        else:
            streak = state.no_water_days + 1
            state = replace(state, no_water_days=streak, hp=state.hp - streak)
        out[spec.id] = state
    for spec in roster:
        state = out[spec.id]
        if state.alive and state.hp <= 0:
            out[spec.id] = replace(state, alive=False, balance=0)
            eliminated.append(spec.id)
    return out, eliminated


@dataclass(frozen=True)
class DayStart:
    """What players learn before bidding: the date, the announced supply,
    and everyone's post-salary status."""

    day: int
    supply: int
    states: dict[str, PlayerState]


class Game:
    """Threads engine state across days and collects the round records."""

    def __init__(self, config: GameConfig) -> None:
        self.config = config
        self.states: dict[str, PlayerState] = {
            spec.id: PlayerState(hp=config.hp_start) for spec in config.roster
        }
        self.rng = SplitMix64(config.seed)
        self.day = 0
        self.rounds: list[RoundRecord] = []
        self._pending: Optional[DayStart] = None

    @property
    def living(self) -> list[str]:
        return [spec.id for spec in self.config.roster if self.states[spec.id].alive]

    @property
    def finished(self) -> bool:
        return self.day >= self.config.days or not self.living

    def begin_day(self) -> DayStart:
        """Advance to the next day: credit salaries, sample and announce supply."""
        if self.finished:
            raise ProtocolError("game is finished")
        if self._pending is not None:
            raise ProtocolError(f"day {self._pending.day} was begun but not stepped")
        self.day += 1
        self.states = credit_salaries(self.states, self.config.roster)
        supply = sample_supply(self.rng, self.config)
        self._pending = DayStart(self.day, supply, dict(self.states))
        return self._pending

    def step_day(self, bids: Sequence[Bid]) -> RoundRecord:
        """Validate the day's sealed bids, run the auction, settle the day."""
        if self._pending is None:
            raise ProtocolError("step_day before begin_day")
        start = self._pending

        by_player: dict[str, Bid] = {}
        for bid in bids:
            if bid.player_id not in self.states:
                raise ProtocolError(f"unknown player {bid.player_id}")
            if not self.states[bid.player_id].alive:
                raise ProtocolError(f"bid from eliminated player {bid.player_id}")
            if bid.player_id in by_player:
                raise ProtocolError(f"duplicate bid from {bid.player_id}")
            if bid.amount is not None:
                if bid.amount < 1:
                    raise ProtocolError(
                        f"{bid.player_id}: bid must be a positive integer (abstain is separate)"
                    )
                if bid.amount > self.states[bid.player_id].balance:
                    raise ProtocolError(
                        f"{bid.player_id}: bid {bid.amount} exceeds balance "
                        f"{self.states[bid.player_id].balance}"
                    )
            by_player[bid.player_id] = bid
        missing = [pid for pid in self.living if pid not in by_player]
        if missing:
            raise ProtocolError(f"no decision for living players: {missing}")

        active = [b for b in by_player.values() if not b.is_abstain]
        winners = allocate(
            active,
            self.config.requirements,
            start.supply,
            stop_at_first_misfit=self.config.stop_at_first_misfit,
        )
        self.states, eliminated = settle_round(
            self.states,
            winners,
            self.config.roster,
            hp_max=self.config.hp_max,
            water_gain=self.config.water_gain,
        )
        record = RoundRecord(
            day=start.day,
            supply=start.supply,
            bids=tuple(by_player[pid] for pid in sorted(by_player)),
            winners=tuple(winners),
            hp_after={pid: s.hp for pid, s in self.states.items()},
            nwd_after={pid: s.no_water_days for pid, s in self.states.items()},
            balance_after={pid: s.balance for pid, s in self.states.items()},
            eliminated=tuple(eliminated),
            min_successful_bid=min((amt for _, amt in winners), default=None),
        )
        self.rounds.append(record)
        self._pending = None
        return record

    def record(self) -> GameRecord:
        if not self.finished:
            raise ProtocolError("game still in progress")
        return GameRecord(
            config=self.config,
            rounds=list(self.rounds),
            final_states=dict(self.states),
        )
