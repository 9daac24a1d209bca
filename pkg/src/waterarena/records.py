"""Game record persistence: canonical JSON, JSON Lines, and re-simulation.

Field names are fixed by docs/game-record-schema.md; SCHEMA_VERSION bumps on
any change. Serialization is canonical (sorted keys, fixed separators) so an
identical game is byte-identical on disk.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Optional

from .engine import (
    Bid,
    Game,
    GameConfig,
    GameRecord,
    PersonaText,
    PlayerSpec,
    PlayerState,
    RoundRecord,
)

SCHEMA_VERSION = 1


class SchemaError(ValueError):
    """Record schema version or structure not supported by this build."""


def _persona_to_dict(persona: Optional[PersonaText]):
    if persona is None:
        return None
    return {
        "profession": persona.profession,
        "personality": persona.personality,
        "background": persona.background,
    }


def config_to_dict(config: GameConfig) -> dict:
    return {
        "roster": [
            {
                "id": spec.id,
                "name": spec.name,
                "requirement": spec.requirement,
                "salary": spec.salary,
                "persona": _persona_to_dict(spec.persona),
            }
            for spec in config.roster
        ],
        "seed": config.seed,
        "days": config.days,
        "hp_start": config.hp_start,
        "hp_max": config.hp_max,
        "water_gain": config.water_gain,
        "supply_low": config.supply_low,
        "supply_high": config.supply_high,
        "stop_at_first_misfit": config.stop_at_first_misfit,
    }


def config_from_dict(data: dict) -> GameConfig:
    roster = tuple(
        PlayerSpec(
            id=entry["id"],
            name=entry["name"],
            requirement=entry["requirement"],
            salary=entry["salary"],
            persona=PersonaText(**entry["persona"]) if entry.get("persona") else None,
        )
        for entry in data["roster"]
    )
    return GameConfig(
        roster=roster,
        seed=data["seed"],
        days=data["days"],
        hp_start=data["hp_start"],
        hp_max=data["hp_max"],
        water_gain=data["water_gain"],
        supply_low=data["supply_low"],
        supply_high=data["supply_high"],
        stop_at_first_misfit=data.get("stop_at_first_misfit", False),
    )


def _round_to_dict(rnd: RoundRecord) -> dict:
    return {
        "day": rnd.day,
        "supply": rnd.supply,
        "bids": [
            {"player_id": b.player_id, "amount": b.amount, "reason": b.reason}
            for b in rnd.bids
        ],
        "winners": [[pid, payment] for pid, payment in rnd.winners],
        "hp_after": rnd.hp_after,
        "nwd_after": rnd.nwd_after,
        "balance_after": rnd.balance_after,
        "eliminated": list(rnd.eliminated),
        "min_successful_bid": rnd.min_successful_bid,
    }


def _round_from_dict(data: dict) -> RoundRecord:
    return RoundRecord(
        day=data["day"],
        supply=data["supply"],
        bids=tuple(
            Bid(b["player_id"], b["amount"], b.get("reason", "")) for b in data["bids"]
        ),
        winners=tuple((pid, payment) for pid, payment in data["winners"]),
        hp_after=dict(data["hp_after"]),
        nwd_after=dict(data["nwd_after"]),
        balance_after=dict(data["balance_after"]),
        eliminated=tuple(data["eliminated"]),
        min_successful_bid=data["min_successful_bid"],
    )


def game_record_to_dict(record: GameRecord) -> dict:
    return {
        "schema_version": record.schema_version,
        "config": config_to_dict(record.config),
        "rounds": [_round_to_dict(rnd) for rnd in record.rounds],
        "final_states": {
            pid: {
                "hp": state.hp,
                "balance": state.balance,
                "no_water_days": state.no_water_days,
                "alive": state.alive,
            }
            for pid, state in record.final_states.items()
        },
    }


def game_record_from_dict(data: dict) -> GameRecord:
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaError(
            f"unsupported schema_version {version!r}; this build reads {SCHEMA_VERSION}"
        )
    return GameRecord(
        config=config_from_dict(data["config"]),
        rounds=[_round_from_dict(rnd) for rnd in data["rounds"]],
        final_states={
            pid: PlayerState(
                hp=entry["hp"],
                balance=entry["balance"],
                no_water_days=entry["no_water_days"],
                alive=entry["alive"],
            )
            for pid, entry in data["final_states"].items()
        },
        schema_version=version,
    )


def dumps_canonical(record: GameRecord) -> str:
    return json.dumps(game_record_to_dict(record), sort_keys=True, separators=(",", ":"))


def loads(text: str) -> GameRecord:
    return game_record_from_dict(json.loads(text))


def write_record(path: Path, record: GameRecord) -> None:
    """Atomic single-record write (temp file then rename)."""
    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(dumps_canonical(record) + "\n")
    tmp.replace(path)


def read_record(path: Path) -> GameRecord:
    return loads(Path(path).read_text())


def write_records_jsonl(path: Path, records: Iterable[GameRecord]) -> None:
    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with tmp.open("w") as handle:
        for record in records:
            handle.write(dumps_canonical(record) + "\n")
    tmp.replace(path)


def read_records_jsonl(path: Path) -> list[GameRecord]:
    out = []
    for line in Path(path).read_text().splitlines():
        if line.strip():
            out.append(loads(line))
    return out


def resimulate(record: GameRecord) -> GameRecord:
    """Feed a record's bids back through the engine from its own config.

    The supply stream comes from the recorded seed; a disagreement with the
    recorded rounds means the record was not produced by this engine.
    """
    game = Game(record.config)
    for rnd in record.rounds:
        start = game.begin_day()
        if start.supply != rnd.supply:
            raise SchemaError(
                f"day {rnd.day}: recorded supply {rnd.supply} != replayed {start.supply}"
            )
        game.step_day(rnd.bids)
    return game.record()
