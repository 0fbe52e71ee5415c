"""Command line front end.

Three subcommands: `run` executes a full experiment and writes the CSV,
`repair-demo` runs episodes until the first detection and prints the
resulting repair as JSON, `calibrate` reports the worst clean-episode
inconsistency and a suggested threshold.

Exit codes: 0 success, 1 usage or config error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .config import ConfigError, load_experiment_config
from .domain import nominal_model
from .environment import Environment
from .harness import AgentKind, run_episode, run_experiment


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modelmend",
        description="Plan, detect novelty, and repair the domain model "
                    "on CartPole.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a full experiment and write CSV")
    run_p.add_argument("--config", required=True, help="experiment JSON path")
    run_p.add_argument("--agent", choices=[k.value for k in AgentKind],
                       help="override the configured agent kind")
    run_p.add_argument("--episodes", type=int, help="override episode count")
    run_p.add_argument("--trials", type=int, help="override trial count")
    run_p.add_argument("--seed", type=int, help="override base_seed")
    run_p.add_argument("--out", required=True, help="output CSV path")
    run_p.set_defaults(func=_cmd_run)

    demo_p = sub.add_parser(
        "repair-demo",
        help="run until the first detection and print the repair JSON")
    demo_p.add_argument("--config", required=True, help="experiment JSON path")
    demo_p.set_defaults(func=_cmd_repair_demo)

    cal_p = sub.add_parser(
        "calibrate",
        help="report the max clean-episode inconsistency and a suggested "
             "threshold")
    cal_p.add_argument("--config", required=True, help="experiment JSON path")
    cal_p.add_argument("--episodes", type=int, required=True,
                       help="clean episodes to sample")
    cal_p.set_defaults(func=_cmd_calibrate)
    return parser


def _cmd_run(args: argparse.Namespace) -> int:
    cfg = load_experiment_config(args.config)
    updates = {"output_path": args.out}
    if args.agent is not None:
        updates["agent"] = AgentKind(args.agent)
    if args.episodes is not None:
        updates["episodes"] = args.episodes
    if args.trials is not None:
        updates["trials"] = args.trials
    if args.seed is not None:
        updates["base_seed"] = args.seed
    try:
        cfg = replace(cfg, **updates)
    except ValueError as exc:
        raise ConfigError(f"invalid override: {exc}") from exc
    records = run_experiment(cfg)
    print(f"wrote {len(records)} records to {cfg.output_path}")
    return 0


def _cmd_repair_demo(args: argparse.Namespace) -> int:
    cfg = load_experiment_config(args.config)
    cfg = replace(cfg, agent=AgentKind.PLANNING_REPAIRING, output_path="")
    env = Environment(replace(cfg.env, seed=cfg.base_seed))
    model = nominal_model()
    for episode in range(cfg.episodes):
        record, model = run_episode(model, env, episode, cfg)
        if record.novelty_detected:
            print(json.dumps(record.repair.as_dict(), separators=(",", ":")))
            return 0
    print(f"no novelty detected within {cfg.episodes} episodes",
          file=sys.stderr)
    return 2


def _cmd_calibrate(args: argparse.Namespace) -> int:
    cfg = load_experiment_config(args.config)
    # novelty events stripped: calibration wants matched-model episodes
    cfg = replace(cfg, env=replace(cfg.env, novelty_schedule=()),
                  agent=AgentKind.PLANNING_STATIC, episodes=args.episodes,
                  output_path="")
    records = run_experiment(cfg)
    worst = max(record.inconsistency for record in records)
    print(f"max clean-episode inconsistency: {worst!r}")
    print(f"suggested C_th: {2.0 * worst!r}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage and 0 on --help; ours is 1 vs 0
        return 0 if exc.code == 0 else 1
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 2


cli_main = main

if __name__ == "__main__":
    sys.exit(main())
