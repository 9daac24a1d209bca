#!/usr/bin/env python3
"""Run experiment settings against a chat-completion endpoint.

Reads WATERARENA_ENDPOINT, WATERARENA_API_KEY, WATERARENA_MODEL (optionally
WATERARENA_API_VERSION) from the environment. With --gateway-mode record every
response is cached under --cache, so the identical grid can later be re-run
with --gateway-mode replay and no network at all.
"""

import argparse
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from waterarena.analysis import aggregate
from waterarena.engine import default_roster
from waterarena.gateway import (
    ChatGateway,
    HttpTransport,
    ProviderConfig,
    ResponseCache,
)
from waterarena.harness import (
    ExperimentSetting,
    apply_personas,
    demo_personas,
    llm_factory,
    run_experiment,
)
from waterarena.plots import render_plots


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path("runs/llm_grid"))
    parser.add_argument("--settings", type=int, nargs="+", default=[1, 2, 3, 4, 5, 6])
    parser.add_argument("--reps", type=int, default=10)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument(
        "--gateway-mode", default="record", choices=("live", "record", "replay")
    )
    parser.add_argument("--cache", type=Path, default=Path("runs/llm_cache"))
    parser.add_argument("--model", help="override WATERARENA_MODEL")
    parser.add_argument("--temperature", type=float, default=0.7)
    parser.add_argument("--parallelism", type=int, default=1)
    args = parser.parse_args()

    cache = ResponseCache(args.cache)
    transport = None
    model = args.model
    if args.gateway_mode in ("live", "record"):
        provider = ProviderConfig.from_env()
        transport = HttpTransport(provider)
        model = model or provider.model
    if not model:
        parser.error("--model is required with --gateway-mode replay")
    gateway = ChatGateway(args.gateway_mode, cache=cache, transport=transport)

    groups = {}
    for setting_id in args.settings:
        setting = ExperimentSetting.table_setting(
            setting_id, repetitions=args.reps, base_seed=args.seed + 1000 * setting_id
        )
        roster = default_roster()
        if setting.persona:
            roster = apply_personas(roster, demo_personas(roster))
        factory = llm_factory(
            gateway,
            model=model,
            persona_enabled=setting.persona,
            experiment=f"setting-{setting_id}",
            temperature=args.temperature,
        )
        result = run_experiment(
            setting,
            args.out / f"setting_{setting_id}",
            agent_factory=factory,
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
