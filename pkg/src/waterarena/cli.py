"""Command line for running experiments, verifying records, and serving games.

Subcommands:
  run      play one experiment setting and write per-game records
  replay   re-simulate a recorded game and verify it byte-for-byte
  analyze  summarize one or more record sets into report files
  plot     render box plots from a plot_data.json produced by analyze
  serve    host live sessions over HTTP
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .analysis import aggregate
from .engine import ConfigError, default_roster
from .harness import (
    ExperimentSetting,
    apply_personas,
    demo_personas,
    llm_factory,
    run_experiment,
)
from .records import (
    SchemaError,
    dumps_canonical,
    read_record,
    read_records_jsonl,
    resimulate,
)


def cmd_run(args) -> int:
    setting = ExperimentSetting.table_setting(
        args.setting,
        repetitions=args.reps,
        agent_kind=args.agents,
        base_seed=args.seed,
    )
    roster = default_roster()
    if setting.persona:
        roster = apply_personas(roster, demo_personas(roster))
    factory = None
    if args.agents == "llm":
        from .gateway import ChatGateway, HttpTransport, ProviderConfig, ResponseCache

        cache = ResponseCache(args.cache) if args.cache else None
        transport = None
        model = args.model
        if args.gateway_mode in ("live", "record"):
            provider = ProviderConfig.from_env()
            transport = HttpTransport(provider)
            model = model or provider.model
        if not model:
            raise ConfigError("--model is required with --gateway-mode replay")
        gateway = ChatGateway(args.gateway_mode, cache=cache, transport=transport)
        factory = llm_factory(
            gateway,
            model=model,
            persona_enabled=setting.persona,
            experiment=f"setting-{setting.setting_id}",
        )
    result = run_experiment(
        setting,
        args.out,
        agent_factory=factory,
        parallelism=args.parallelism,
        parallel_decisions=args.parallel_decisions,
        roster=roster,
    )
    print(f"completed {len(result.records)} games -> {result.records_path}")
    if result.failed:
        for rep, reason in sorted(result.failed.items()):
            print(f"rep {rep} failed: {reason}", file=sys.stderr)
        return 1
    return 0


def cmd_replay(args) -> int:
    record = read_record(args.record)
    try:
        replayed = resimulate(record)
    except SchemaError as exc:
        print(f"{args.record}: replay FAILED: {exc}", file=sys.stderr)
        return 1
    if dumps_canonical(replayed) == dumps_canonical(record):
        print(f"{args.record}: replay OK ({len(record.rounds)} rounds)")
        return 0
    print(f"{args.record}: replay MISMATCH", file=sys.stderr)
    return 1


def _group_label(records_path: Path) -> str:
    manifest = records_path.parent / "manifest.json"
    if manifest.exists():
        try:
            setting = json.loads(manifest.read_text())["setting"]
            return f"setting-{setting['setting_id']}"
        except (KeyError, TypeError, ValueError):
            pass
    return records_path.parent.name or records_path.stem


def cmd_analyze(args) -> int:
    groups = {}
    for target in args.records:
        target = Path(target)
        records_path = target / "records.jsonl" if target.is_dir() else target
        label = _group_label(records_path)
        if label in groups:
            raise ConfigError(f"two record sets resolve to the label {label!r}")
        groups[label] = read_records_jsonl(records_path)
    report = aggregate(groups)
    paths = report.write(args.out)
    for name in sorted(paths):
        print(f"{name}: {paths[name]}")
    return 0


def cmd_plot(args) -> int:
    from .plots import render_plots

    plot_data = json.loads(Path(args.plot_data).read_text())
    paths = render_plots(plot_data, args.out)
    for name in sorted(paths):
        print(f"{name}: {paths[name]}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import SessionManager, create_app

    static_dir = args.static
    if static_dir is not None and not static_dir.is_dir():
        raise ConfigError(f"static directory not found: {static_dir}")
    manager = SessionManager(records_dir=args.records_dir)
    manager.start_ticker(args.tick)
    app = create_app(manager, static_dir=static_dir)
    try:
        uvicorn.run(app, host=args.host, port=args.port)
    finally:
        manager.stop_ticker()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="waterarena",
        description="Sealed-bid water auction survival game.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="play one experiment setting")
    run.add_argument("--setting", type=int, required=True, choices=(1, 2, 3, 4, 5, 6))
    run.add_argument("--reps", type=int, default=10)
    run.add_argument(
        "--agents",
        default="scripted:desperation",
        help="llm | scripted:<strategy> | mixed:<s1>,<s2>,...",
    )
    run.add_argument("--seed", type=int, default=0, help="base seed; rep i uses seed+i")
    run.add_argument("--out", type=Path, required=True)
    run.add_argument("--parallelism", type=int, default=1)
    run.add_argument("--parallel-decisions", action="store_true")
    run.add_argument(
        "--gateway-mode", default="live", choices=("live", "record", "replay")
    )
    run.add_argument("--cache", type=Path, help="response cache dir (record/replay)")
    run.add_argument("--model", help="model name; defaults to WATERARENA_MODEL")
    run.set_defaults(func=cmd_run)

    replay = sub.add_parser("replay", help="verify a recorded game re-simulates identically")
    replay.add_argument("record", type=Path)
    replay.set_defaults(func=cmd_replay)

    analyze = sub.add_parser("analyze", help="summarize record sets into report files")
    analyze.add_argument("records", nargs="+", help="records.jsonl files or their directories")
    analyze.add_argument("--out", type=Path, required=True)
    analyze.set_defaults(func=cmd_analyze)

    plot = sub.add_parser("plot", help="render plots from plot_data.json")
    plot.add_argument("plot_data", type=Path)
    plot.add_argument("--out", type=Path, required=True)
    plot.set_defaults(func=cmd_plot)

    serve = sub.add_parser("serve", help="host live sessions over HTTP")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--records-dir", type=Path, default=Path("sessions"))
    serve.add_argument("--tick", type=float, default=1.0, help="ticker interval seconds")
    serve.add_argument(
        "--static",
        type=Path,
        default=None,
        help="directory with the built web client, served at /app",
    )
    serve.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
