"""Indicators and summaries computed from game records.

RSR (resource satisfaction rate) is the expected daily supply divided by the
summed daily requirements of a player set, kept as an exact rational and
rendered at two decimals. RSR_S uses the full roster, RSR_E the survivors of
a finished game; a game with no survivors has no RSR_E and is reported with
a distinct marker rather than 0 or infinity.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence

from .engine import GameRecord, PlayerSpec
from .records import SCHEMA_VERSION, SchemaError

ALL_ELIMINATED = "all eliminated"

QUANTILE_CONVENTION = "linear interpolation between closest ranks"
WHISKER_CONVENTION = "whiskers at min and max of the observed values"
EARLY_END_CONVENTION = "days after a run ended contribute no value"


class AllEliminatedError(ValueError):
    """RSR over an empty survivor set is undefined."""


def expected_supply(supply_low: int, supply_high: int) -> Fraction:
    return Fraction(supply_low + supply_high, 2)


def compute_rsr(
    supply_low: int, supply_high: int, survivors: Sequence[PlayerSpec]
) -> Fraction:
    if not survivors:
        raise AllEliminatedError("no survivors: RSR undefined")
    total = sum(spec.requirement for spec in survivors)
    return expected_supply(supply_low, supply_high) / total


def format_rsr(value: Optional[Fraction]) -> str:
    if value is None:
        return ALL_ELIMINATED
    quantized = (Decimal(value.numerator) / Decimal(value.denominator)).quantize(
        Decimal("0.01"), rounding=ROUND_HALF_UP
    )
    return str(quantized)


def quantile(values: Sequence[float], q: float) -> float:
    """Order statistic with linear interpolation between closest ranks."""
    if not values:
        raise ValueError("quantile of empty sequence")
    if not 0 <= q <= 1:
        raise ValueError("q must be in [0, 1]")
    ordered = sorted(values)
    position = q * (len(ordered) - 1)
    lower = math.floor(position)
    upper = math.ceil(position)
    if lower == upper:
        return float(ordered[lower])
    weight = position - lower
    return float(ordered[lower] * (1 - weight) + ordered[upper] * weight)


@dataclass(frozen=True)
class IndicatorSet:
    rsr_s: Fraction
    rsr_e: Optional[Fraction]
    n_survivor: int
    survival: Dict[str, bool]
    min_bid_series: Dict[int, Optional[int]]


def compute_indicators(record: GameRecord) -> IndicatorSet:
    if record.schema_version != SCHEMA_VERSION:
        raise SchemaError(
            f"unsupported schema_version {record.schema_version!r};"
            f" this build reads {SCHEMA_VERSION}"
        )
    config = record.config
    survival = {pid: state.alive for pid, state in record.final_states.items()}
    survivors = [spec for spec in config.roster if survival[spec.id]]
    rsr_s = compute_rsr(config.supply_low, config.supply_high, config.roster)
    try:
        rsr_e = compute_rsr(config.supply_low, config.supply_high, survivors)
    except AllEliminatedError:
        rsr_e = None
    return IndicatorSet(
        rsr_s=rsr_s,
        rsr_e=rsr_e,
        n_survivor=sum(survival.values()),
        survival=survival,
        min_bid_series={rnd.day: rnd.min_successful_bid for rnd in record.rounds},
    )


@dataclass(frozen=True)
class BoxStats:
    lo: float
    q1: float
    median: float
    q3: float
    hi: float

    @classmethod
    def of(cls, values: Sequence[float]) -> "BoxStats":
        return cls(
            lo=float(min(values)),
            q1=quantile(values, 0.25),
            median=quantile(values, 0.5),
            q3=quantile(values, 0.75),
            hi=float(max(values)),
        )


@dataclass
class GroupSummary:
    label: str
    n_runs: int
    roster: List[PlayerSpec]
    seeds: List[int]
    days_played: List[int]
    survival_rate: Dict[str, Fraction]
    rsr_s_values: List[Fraction]
    rsr_e_values: List[Optional[Fraction]]
    n_survivor: List[int]
    min_bids_by_day: Dict[int, List[int]]
    box_by_day: Dict[int, BoxStats]
    median_series: Dict[int, float]
    mean_of_medians: Optional[float]

    @property
    def all_eliminated_runs(self) -> int:
        return sum(1 for v in self.rsr_e_values if v is None)

    @property
    def mean_rsr_s(self) -> Fraction:
        return sum(self.rsr_s_values, Fraction(0)) / len(self.rsr_s_values)

    @property
    def mean_rsr_e(self) -> Optional[Fraction]:
        present = [v for v in self.rsr_e_values if v is not None]
        if not present:
            return None
        return sum(present, Fraction(0)) / len(present)


def summarize_group(label: str, records: Sequence[GameRecord]) -> GroupSummary:
    if not records:
        raise ValueError(f"group {label!r} has no records")
    versions = {record.schema_version for record in records}
    if len(versions) > 1:
        raise SchemaError(f"group {label!r} mixes schema versions: {sorted(versions)}")
    indicators = [compute_indicators(record) for record in records]
    roster = list(records[0].config.roster)
    survival_rate = {
        spec.id: Fraction(
            sum(1 for ind in indicators if ind.survival[spec.id]), len(records)
        )
        for spec in roster
    }
    min_bids_by_day: Dict[int, List[int]] = {}
    for ind in indicators:
        for day, value in ind.min_bid_series.items():
            if value is not None:
                min_bids_by_day.setdefault(day, []).append(value)
    box_by_day = {day: BoxStats.of(vals) for day, vals in sorted(min_bids_by_day.items())}
    median_series = {day: box.median for day, box in box_by_day.items()}
    mean_of_medians = (
        sum(median_series.values()) / len(median_series) if median_series else None
    )
    return GroupSummary(
        label=label,
        n_runs=len(records),
        roster=roster,
        seeds=[record.config.seed for record in records],
        days_played=[len(record.rounds) for record in records],
        survival_rate=survival_rate,
        rsr_s_values=[ind.rsr_s for ind in indicators],
        rsr_e_values=[ind.rsr_e for ind in indicators],
        n_survivor=[ind.n_survivor for ind in indicators],
        min_bids_by_day=min_bids_by_day,
        box_by_day=box_by_day,
        median_series=median_series,
        mean_of_medians=mean_of_medians,
    )


@dataclass
class AggregateReport:
    groups: Dict[str, GroupSummary]

    def metadata(self) -> dict:
        return {
            "quantiles": QUANTILE_CONVENTION,
            "whiskers": WHISKER_CONVENTION,
            "early_end_days": EARLY_END_CONVENTION,
            "rsr_rounding": "2 decimals, half up",
        }

    def plot_data(self) -> dict:
        groups = {}
        for label, g in self.groups.items():
            groups[label] = {
                "min_bid": {
                    "days": {
                        str(day): {
                            "values": g.min_bids_by_day[day],
                            "lo": box.lo,
                            "q1": box.q1,
                            "median": box.median,
                            "q3": box.q3,
                            "hi": box.hi,
                        }
                        for day, box in g.box_by_day.items()
                    },
                    "median_series": {
                        str(day): med for day, med in g.median_series.items()
                    },
                    "mean_of_medians": g.mean_of_medians,
                },
                "n_survivor": g.n_survivor,
                "rsr_e": [None if v is None else float(v) for v in g.rsr_e_values],
                "all_eliminated_runs": g.all_eliminated_runs,
                "n_runs": g.n_runs,
            }
        return {"metadata": self.metadata(), "groups": groups}

    def summary_text(self) -> str:
        blocks = []
        for label, g in self.groups.items():
            lines = [
                f"== {label} ==",
                f"runs: {g.n_runs}",
                f"RSR_S: {format_rsr(g.mean_rsr_s)}",
            ]
            rsr_e_line = f"RSR_E (mean over surviving runs): {format_rsr(g.mean_rsr_e)}"
            if g.all_eliminated_runs:
                rsr_e_line += f" ({ALL_ELIMINATED} in {g.all_eliminated_runs} runs)"
            lines.append(rsr_e_line)
            lines.append("survival rates:")
            for spec in g.roster:
                lines.append(
                    f"  {spec.name}: {format_rsr(g.survival_rate[spec.id])}"
                )
            lines.append(
                "n_survivor per run: " + ", ".join(str(n) for n in g.n_survivor)
            )
            if g.mean_of_medians is not None:
                lines.append(
                    f"min successful bid, mean of daily medians: {g.mean_of_medians:.2f}"
                )
            else:
                lines.append("min successful bid: no successful bids recorded")
            blocks.append("\n".join(lines))
        return "\n\n".join(blocks) + "\n"

    def write(self, out_dir: Path) -> Dict[str, Path]:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        paths = {
            "players": out_dir / "summary_players.csv",
            "runs": out_dir / "summary_runs.csv",
            "plot_data": out_dir / "plot_data.json",
            "summary": out_dir / "summary.txt",
        }
        with paths["players"].open("w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["group", "player_id", "name", "survival_rate", "runs"])
            for label, g in self.groups.items():
                for spec in g.roster:
                    writer.writerow(
                        [label, spec.id, spec.name, format_rsr(g.survival_rate[spec.id]), g.n_runs]
                    )
        with paths["runs"].open("w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(
                ["group", "run_index", "seed", "days_played", "rsr_s", "rsr_e", "n_survivor"]
            )
            for label, g in self.groups.items():
                for i in range(g.n_runs):
                    writer.writerow(
                        [
                            label,
                            i,
                            g.seeds[i],
                            g.days_played[i],
                            format_rsr(g.rsr_s_values[i]),
                            format_rsr(g.rsr_e_values[i]),
                            g.n_survivor[i],
                        ]
                    )
        paths["plot_data"].write_text(json.dumps(self.plot_data(), indent=2, sort_keys=True))
        paths["summary"].write_text(self.summary_text())
        return paths


def aggregate(groups: Mapping[str, Sequence[GameRecord]]) -> AggregateReport:
    return AggregateReport(
        groups={label: summarize_group(label, records) for label, records in groups.items()}
    )
