#!/usr/bin/env python3
"""Run the full 6-setting grid with scripted agents, then build the report.

Offline and reproducible: same seeds give byte-identical records. Useful as a
smoke test of the whole pipeline and as a template for LLM-backed runs (see
run_llm_grid.py for those).
"""

import argparse
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from waterarena.analysis import aggregate
from waterarena.engine import default_roster
from waterarena.harness import (
    ExperimentSetting,
    apply_personas,
    demo_personas,
    run_experiment,
)
from waterarena.plots import render_plots


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path("runs/grid"))
    parser.add_argument("--reps", type=int, default=10)
    parser.add_argument(
        "--agents",
        default="mixed:desperation,constant:5,random:11",
        help="scripted:<strategy> or mixed:<s1>,<s2>,...",
    )
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--parallelism", type=int, default=2)
    args = parser.parse_args()

    groups = {}
    for setting_id in range(1, 7):
        setting = ExperimentSetting.table_setting(
            setting_id,
            repetitions=args.reps,
            agent_kind=args.agents,
            base_seed=args.seed + 1000 * setting_id,
        )
        roster = default_roster()
        if setting.persona:
            roster = apply_personas(roster, demo_personas(roster))
        result = run_experiment(
            setting,
            args.out / f"setting_{setting_id}",
            roster=roster,
            parallelism=args.parallelism,
        )
        note = f", {len(result.failed)} failed" if result.failed else ""
        print(f"setting {setting_id}: {len(result.records)} games{note}")
        groups[f"setting-{setting_id}"] = result.records

    report = aggregate(groups)
    paths = report.write(args.out / "report")
    figures = render_plots(
        json.loads(paths["plot_data"].read_text()), args.out / "figures"
    )
    for name in sorted({**paths, **figures}):
        print(f"{name}: {({**paths, **figures})[name]}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
