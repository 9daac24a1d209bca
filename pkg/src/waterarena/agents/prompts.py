"""Render game text from the plain-text templates.

Templates live in templates/ with {placeholder} fields. Rendering with the
canonical five-resident roster reproduces the published game text; golden
fixtures under tests/golden pin that output.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

from ..engine import ConfigError, GameConfig, PersonaText, PlayerSpec, PlayerState, RoundRecord

_NUMBER_WORDS = {
    1: "one", 2: "two", 3: "three", 4: "four", 5: "five", 6: "six",
    7: "seven", 8: "eight", 9: "nine", 10: "ten", 11: "eleven", 12: "twelve",
}


def number_word(n: int) -> str:
    return _NUMBER_WORDS.get(n, str(n))


def _template(name: str) -> str:
    return (
        resources.files("waterarena.agents").joinpath("templates").joinpath(name).read_text()
    )


def roster_block(roster: Sequence[PlayerSpec]) -> str:
    return "\n".join(
        f"   - {spec.name}: Water requirement - {spec.requirement} units/day;"
        f" Daily Salary - ${spec.salary}/day"
        for spec in roster
    )


def render_persona(persona: PersonaText) -> str:
    return (
        "Your persona:\n\n"
        f"Profession: {persona.profession}\n"
        f"Personality: {persona.personality}\n"
        f"Background: {persona.background}"
    )


def render_system_prompt(
    spec: PlayerSpec, config: GameConfig, persona_enabled: bool = False
) -> str:
    text = _template("system_rules.txt").format(
        player=spec.name,
        days=config.days,
        resident_count=number_word(len(config.roster)),
        hp_max=config.hp_max,
        hp_start=config.hp_start,
        water_gain=config.water_gain,
        lower=config.supply_low,
        upper=config.supply_high,
        roster_block=roster_block(config.roster),
    ).rstrip("\n")
    if persona_enabled:
        if spec.persona is None:
            raise ConfigError(f"persona enabled but player {spec.id!r} has none")
        text = text + "\n\n" + render_persona(spec.persona)
    return text


def render_status(hp: int, balance: int, no_water_days: int) -> str:
    return (
        f"- Health Points: {hp}\n"
        f"- Balance: ${balance}\n"
        f"- No-Water Days: {no_water_days}"
    )


def render_bid_call(player_name: str, day: int, supply: int, status: str) -> str:
    return _template("bid_call.txt").format(
        player=player_name, round=day, supply_amount=supply, status=status
    ).rstrip("\n")


def _names_list(names: Sequence[str]) -> str:
    if not names:
        return "no one"
    if len(names) == 1:
        return names[0]
    return ", ".join(names[:-1]) + " and " + names[-1]


def render_results_announcement(
    record: RoundRecord, roster: Sequence[PlayerSpec]
) -> str:
    specs = {spec.id: spec for spec in roster}
    offers = []
    for bid in record.bids:
        spec = specs[bid.player_id]
        if bid.amount is None:
            offers.append(f"{spec.name}: did not participate")
        else:
            offers.append(f"{spec.name}: ${bid.amount} for {spec.requirement} units")
    winner_names = [specs[pid].name for pid, _ in record.winners]
    return _template("results_announcement.txt").format(
        round=record.day,
        bidding_offers="\n\n".join(offers),
        supply=record.supply,
        allocation_result=_names_list(winner_names),
    ).rstrip("\n")


def render_participants_info(
    states: Mapping[str, PlayerState], roster: Sequence[PlayerSpec]
) -> str:
    lines = []
    for spec in roster:
        state = states[spec.id]
        line = (
            f"- {spec.name}: Health Points - {state.hp};"
            f" Balance - ${state.balance}; No-Water Days - {state.no_water_days}"
        )
        if not state.alive:
            line += " (eliminated)"
        lines.append(line)
    return _template("participants_info.txt").format(
        status_lines="\n".join(lines)
    ).rstrip("\n")


def parse_persona(text: str, source: str = "<string>") -> PersonaText:
    """Parse persona text with profession/personality/background keys.

    Lines starting with '#' are comments; a key's text runs until the next
    key. All three keys are required.
    """
    sections: dict[str, list[str]] = {}
    current: str | None = None
    for line in text.splitlines():
        if line.lstrip().startswith("#"):
            continue
        stripped = line.strip()
        lowered = stripped.lower()
        matched = False
        for key in ("profession", "personality", "background"):
            if lowered.startswith(key + ":"):
                current = key
                sections[key] = [stripped[len(key) + 1 :].strip()]
                matched = True
                break
        if matched:
            continue
        if current is not None and stripped:
            sections[current].append(stripped)
    missing = [k for k in ("profession", "personality", "background") if not sections.get(k)]
    if missing:
        raise ConfigError(f"persona {source} missing sections: {', '.join(missing)}")
    return PersonaText(
        profession=" ".join(sections["profession"]),
        personality=" ".join(sections["personality"]),
        background=" ".join(sections["background"]),
    )


def load_persona(path: Path) -> PersonaText:
    return parse_persona(Path(path).read_text(), source=str(path))


def bundled_persona(name: str) -> PersonaText:
    """Load one of the example personas shipped with the package."""
    text = (
        resources.files("waterarena.agents")
        .joinpath("personas")
        .joinpath(f"{name}.txt")
        .read_text()
    )
    return parse_persona(text, source=f"bundled:{name}")
