"""Command-line entry point: ``simulate``, ``sweep`` and ``oracle-check``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .arms import ArmSpace
from .config import ConfigError, parse_config, parse_value
from .engine import SweepError, expand_grid, run, run_sweep
from .io import write_config, write_summary, write_trace
from .policies import oracle_choose
from .workload import SeededSource, draw_slot


def split_values(text: str) -> list[str]:
    """Split on commas that are not inside brackets, so ``[1,2],[3,4]`` gives two items."""
    parts, depth, current = [], 0, []
    for ch in text:
        if ch in "[{":
            depth += 1
        elif ch in "]}":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    return [p.strip() for p in parts if p.strip()]


def _add_config_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", default=None, help="stable, unstable, tidal or custom")
    p.add_argument("--config", default=None, help="JSON config file ({'preset': ..., 'set': {...}})")
    p.add_argument("--set", dest="sets", action="append", default=[], metavar="KEY=VALUE",
                   help="override one config key; repeatable")


def _config(args, seed=None):
    preset = args.preset
    if preset is None and args.config is None:
        preset = "tidal"
    return parse_config(args.config, preset=preset, sets=args.sets, seed=seed)


def cmd_simulate(args) -> int:
    config = _config(args, seed=args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    records, summary = run(config)
    write_trace(records, out / "trace.csv")
    write_summary(summary, out / "summary.json")
    write_config(config, out / "config.json")
    print(f"{summary.policy} seed={summary.seed}: final average cost {summary.final_avg_cost:.6f}"
          f" over {summary.horizon} slots -> {out}")
    return 0


def cmd_sweep(args) -> int:
    base = _config(args)
    vary = {}
    for item in args.vary:
        key, sep, text = item.partition("=")
        if not sep:
            raise ConfigError(item, "expected key=v1,v2,...")
        vary[key.strip()] = [parse_value(v) for v in split_values(text)]
    try:
        seeds = [int(s) for s in split_values(args.seeds)]
    except ValueError:
        raise ConfigError("seeds", f"expected comma-separated integers, got {args.seeds!r}") from None
    if not seeds:
        raise ConfigError("seeds", "at least one seed is required")
    results = run_sweep(base, expand_grid(vary), seeds, workers=args.workers)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_summary(results, out / "summary.json")
    print(f"{len(results)} runs -> {out / 'summary.json'}")
    return 0


def cmd_oracle_check(args) -> int:
    config = _config(args, seed=args.seed)
    profile = config.profile
    arms = ArmSpace(profile.num_users, profile.num_servers, config.arm_cap)
    source = SeededSource(config.seed, 0)
    mismatches = 0
    for t in range(1, args.slots + 1):
        workload = draw_slot(config.pattern, source, t)
        _, joint, decomposed = oracle_choose(profile, workload, arms)
        if joint != decomposed:
            mismatches += 1
            print(f"slot {t}: joint {joint!r} != decomposed {decomposed!r}", file=sys.stderr)
    print(f"oracle-check: {args.slots} slots, {len(arms)} arms, {mismatches} mismatches")
    return 1 if mismatches else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="edgebandit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one experiment and write trace and summary")
    _add_config_args(p)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="run a grid of overrides over several seeds")
    _add_config_args(p)
    p.add_argument("--vary", action="append", default=[], metavar="KEY=V1,V2,...")
    p.add_argument("--seeds", required=True, help="comma-separated seeds")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle-check", help="compare brute-force and per-user optima")
    _add_config_args(p)
    p.add_argument("--slots", type=int, default=500)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_oracle_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: invalid configuration: {exc}", file=sys.stderr)
        return 2
    except SweepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
