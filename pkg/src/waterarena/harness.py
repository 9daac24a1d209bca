"""Batch experiment runner: 6-setting grid, seeding, persistence, resume.

Each repetition is an independent game seeded base_seed + rep, persisted to
its own file as soon as it finishes; a manifest tracks completion so an
interrupted batch resumes without redoing or reordering work. records.jsonl
is assembled from the per-game files in repetition order at the end, which
makes its bytes independent of execution order and of interruptions.
"""

from __future__ import annotations

import json
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Mapping, Optional, Sequence

from .agents.base import Agent, AgentView
from .agents.prompts import (
    bundled_persona,
    render_participants_info,
    render_results_announcement,
)
from .agents.scripted import ScriptedAgent, make_strategy
from .engine import (
    ABUNDANCE_BOUNDS,
    Bid,
    ConfigError,
    Game,
    GameConfig,
    GameRecord,
    PersonaText,
    PlayerSpec,
    config_for_abundance,
    default_roster,
)
from .records import dumps_canonical, read_record, write_record, write_records_jsonl

SETTING_ABUNDANCE = {1: "low", 2: "medium", 3: "high", 4: "low", 5: "medium", 6: "high"}
SETTING_PERSONA = {1: False, 2: False, 3: False, 4: True, 5: True, 6: True}

AgentFactory = Callable[[GameConfig, int], Dict[str, Agent]]


@dataclass(frozen=True)
class ExperimentSetting:
    setting_id: int
    abundance: str
    persona: bool
    repetitions: int
    agent_kind: str
    base_seed: int

    def __post_init__(self):
        if self.abundance not in ABUNDANCE_BOUNDS:
            raise ConfigError(f"unknown abundance {self.abundance!r}")
        if self.repetitions < 0:
            raise ConfigError("repetitions must be >= 0")

    @classmethod
    def table_setting(
        cls,
        setting_id: int,
        repetitions: int = 10,
        agent_kind: str = "llm",
        base_seed: int = 0,
    ) -> "ExperimentSetting":
        if setting_id not in SETTING_ABUNDANCE:
            raise ConfigError(f"setting_id must be 1..6, got {setting_id}")
        return cls(
            setting_id=setting_id,
            abundance=SETTING_ABUNDANCE[setting_id],
            persona=SETTING_PERSONA[setting_id],
            repetitions=repetitions,
            agent_kind=agent_kind,
            base_seed=base_seed,
        )

    def to_dict(self) -> dict:
        return {
            "setting_id": self.setting_id,
            "abundance": self.abundance,
            "persona": self.persona,
            "repetitions": self.repetitions,
            "agent_kind": self.agent_kind,
            "base_seed": self.base_seed,
        }


def apply_personas(
    roster: Sequence[PlayerSpec], personas: Mapping[str, PersonaText]
) -> tuple:
    out = []
    for spec in roster:
        persona = personas.get(spec.id, spec.persona)
        out.append(
            PlayerSpec(spec.id, spec.name, spec.requirement, spec.salary, persona)
        )
    return tuple(out)


def demo_personas(roster: Sequence[PlayerSpec]) -> Dict[str, PersonaText]:
    """Assign the bundled example personas cyclically across the roster."""
    names = ("farmer", "trader", "nurse")
    return {
        spec.id: bundled_persona(names[i % len(names)])
        for i, spec in enumerate(roster)
    }


def scripted_factory(agent_kind: str) -> AgentFactory:
    """Build per-game scripted agents from "scripted:<spec>" or "mixed:<s1>,<s2>,...".

    Mixed specs are assigned to players in roster order, cycling. A random
    strategy's seed is offset per game and per player so repetitions stay
    independent yet reproducible.
    """
    kind, _, rest = agent_kind.partition(":")
    if kind == "scripted":
        specs = [rest]
    elif kind == "mixed":
        specs = [s for s in rest.split(",") if s]
    else:
        raise ConfigError(f"not a scripted agent kind: {agent_kind!r}")
    if not specs or any(not s for s in specs):
        raise ConfigError(f"bad agent kind {agent_kind!r}")

    def derive(spec: str, game_index: int, player_index: int) -> str:
        name, _, arg = spec.partition(":")
        if name == "random":
            seed = int(arg) + 101 * game_index + player_index
            return f"random:{seed}"
        return spec

    def factory(config: GameConfig, game_index: int) -> Dict[str, Agent]:
        agents: Dict[str, Agent] = {}
        for i, player in enumerate(config.roster):
            strategy_spec = derive(specs[i % len(specs)], game_index, i)
            agents[player.id] = ScriptedAgent(player.id, make_strategy(strategy_spec))
        return agents

    return factory


def llm_factory(
    gateway,
    model: str,
    persona_enabled: bool = False,
    experiment: str = "",
    temperature: float = 0.7,
    max_tokens: int = 512,
) -> AgentFactory:
    from .agents.llm import LLMAgent

    def factory(config: GameConfig, game_index: int) -> Dict[str, Agent]:
        return {
            spec.id: LLMAgent(
                spec,
                config,
                gateway,
                model=model,
                persona_enabled=persona_enabled,
                temperature=temperature,
                max_tokens=max_tokens,
                experiment=experiment,
                game_index=game_index,
            )
            for spec in config.roster
        }

    return factory


def agent_factory_for(setting: ExperimentSetting) -> AgentFactory:
    if setting.agent_kind.startswith(("scripted:", "mixed:")):
        return scripted_factory(setting.agent_kind)
    raise ConfigError(
        f"agent kind {setting.agent_kind!r} needs an explicit factory (llm agents"
        " require a configured gateway)"
    )


def play_game(
    config: GameConfig,
    agents: Mapping[str, Agent],
    parallel_decisions: bool = False,
) -> GameRecord:
    """Run one full game: solicit sealed decisions, settle, inform survivors."""
    missing = [spec.id for spec in config.roster if spec.id not in agents]
    if missing:
        raise ConfigError(f"no agent for players: {missing}")
    game = Game(config)
    names = {spec.id: spec.name for spec in config.roster}
    while not game.finished:
        start = game.begin_day()
        living = list(game.living)
        views = {
            pid: AgentView(
                player_id=pid,
                name=names[pid],
                day=start.day,
                supply=start.supply,
                hp=start.states[pid].hp,
                balance=start.states[pid].balance,
                no_water_days=start.states[pid].no_water_days,
            )
            for pid in living
        }
        if parallel_decisions and len(living) > 1:
            with ThreadPoolExecutor(max_workers=len(living)) as pool:
                futures = {
                    pid: pool.submit(agents[pid].decide, views[pid]) for pid in living
                }
                decisions = {pid: futures[pid].result() for pid in living}
        else:
            decisions = {pid: agents[pid].decide(views[pid]) for pid in living}
        bids = [
            Bid(pid, decisions[pid].amount, decisions[pid].reason) for pid in living
        ]
        round_record = game.step_day(bids)
        announcement = render_results_announcement(round_record, config.roster)
        info = render_participants_info(game.states, config.roster)
        for pid in game.living:
            agents[pid].observe_round(start.day, announcement, info)
    return game.record()


@dataclass
class ExperimentResult:
    setting: ExperimentSetting
    records: List[GameRecord]
    failed: Dict[int, str]
    out_dir: Path

    @property
    def records_path(self) -> Path:
        return self.out_dir / "records.jsonl"


class _Manifest:
    def __init__(self, path: Path, setting: ExperimentSetting):
        self.path = path
        self.lock = threading.Lock()
        if path.exists():
            self.data = json.loads(path.read_text())
            if self.data.get("setting") != setting.to_dict():
                raise ConfigError(
                    f"manifest at {path} belongs to a different setting"
                )
        else:
            self.data = {
                "setting": setting.to_dict(),
                "schema_version": 1,
                "games": {},
            }
            self._flush()

    def _flush(self):
        tmp = self.path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(self.data, indent=2, sort_keys=True))
        tmp.replace(self.path)

    def game(self, rep: int) -> Optional[dict]:
        return self.data["games"].get(str(rep))

    def mark(self, rep: int, **fields):
        with self.lock:
            self.data["games"][str(rep)] = fields
            self._flush()


def run_experiment(
    setting: ExperimentSetting,
    out_dir: Path,
    agent_factory: Optional[AgentFactory] = None,
    parallelism: int = 1,
    parallel_decisions: bool = False,
    roster: Optional[Sequence[PlayerSpec]] = None,
) -> ExperimentResult:
    if agent_factory is None:
        agent_factory = agent_factory_for(setting)
    roster = tuple(roster) if roster is not None else default_roster()
    out_dir = Path(out_dir)
    games_dir = out_dir / "games"
    games_dir.mkdir(parents=True, exist_ok=True)
    manifest = _Manifest(out_dir / "manifest.json", setting)

    def game_path(rep: int) -> Path:
        return games_dir / f"rep_{rep:03d}.json"

    def run_rep(rep: int):
        entry = manifest.game(rep)
        if entry and entry.get("status") == "completed" and game_path(rep).exists():
            return
        seed = setting.base_seed + rep
        config = config_for_abundance(setting.abundance, roster, seed=seed)
        try:
            agents = agent_factory(config, rep)
            record = play_game(config, agents, parallel_decisions=parallel_decisions)
            write_record(game_path(rep), record)
            manifest.mark(
                rep,
                seed=seed,
                status="completed",
                file=str(game_path(rep).relative_to(out_dir)),
            )
        except Exception as exc:  # single-game failure must not stop the batch
            manifest.mark(rep, seed=seed, status="failed", error=repr(exc))

    reps = list(range(setting.repetitions))
    if parallelism > 1 and len(reps) > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            list(pool.map(run_rep, reps))
    else:
        for rep in reps:
            run_rep(rep)

    records: List[GameRecord] = []
    failed: Dict[int, str] = {}
    for rep in reps:
        entry = manifest.game(rep) or {}
        if entry.get("status") == "completed":
            records.append(read_record(game_path(rep)))
        else:
            failed[rep] = entry.get("error", "missing")
    write_records_jsonl(out_dir / "records.jsonl", records)
    return ExperimentResult(
        setting=setting, records=records, failed=failed, out_dir=out_dir
    )
