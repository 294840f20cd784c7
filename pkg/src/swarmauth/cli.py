"""Command-line entry point: keygen, run, compare, oracle."""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys
from pathlib import Path

from .algebra import make_group
from .groupauth import ControlStation, GroupAuthError, save_keyset
from .latency import crossover_table, latency_curves, load_model, write_curve_csv
from .oracle import run_selftest
from .protocol.swarm import ConfigurationError
from .runner import EXIT_USAGE, SEED_ENV, ConfigError, ScenarioConfig, load_config, run_config


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which would collide with "rejected"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _seed(value: int | None) -> int:
    if value is not None:
        return value
    return ScenarioConfig(scenario="nr_baseline", seed=None).resolved_seed()


def cmd_keygen(args) -> int:
    if args.threshold < 1 or args.members < 1:
        raise ConfigError("threshold and members must be positive")
    group = make_group(args.group, args.toy_order)
    station = ControlStation(group, args.threshold, random.Random(_seed(args.seed)))
    creds = station.issue(args.members)
    save_keyset(args.out, station.params, creds)
    print(json.dumps({
        "out": str(args.out),
        "group": args.group,
        "threshold": args.threshold,
        "members": [c.index for c in creds],
    }))
    return 0


def cmd_run(args) -> int:
    config = load_config(args.config)
    result = run_config(config, load_model(args.model), args.trace)
    print(json.dumps(result.report.to_json(), indent=2))
    return result.report.exit_code


def cmd_compare(args) -> int:
    if args.max_threshold < 1 or args.max_drones < 1:
        raise ConfigError("curve ranges must be positive")
    model = load_model(args.model)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, curve in latency_curves(args.max_threshold, args.max_drones, args.swarm_threshold, model).items():
        write_curve_csv(curve, out / f"{name}.csv")
    table = crossover_table(model, args.swarm_threshold)
    with open(out / "crossovers.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["comparison", "crossover"])
        w.writerows(table.items())
    for name, k in table.items():
        print(f"{name}={k}")
    return 0


def cmd_oracle(args) -> int:
    if not args.selftest:
        raise ConfigError("nothing to do; pass --selftest")
    report = run_selftest(args.trials, _seed(args.seed))
    for line in report.mismatches:
        print(f"MISMATCH {line}")
    print(f"oracle: {report.instances} instances, {report.checks} checks, {len(report.mismatches)} mismatches")
    return 0 if report.ok else 4


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="swarmauth", description="Group authentication for drone swarms, simulated.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    k = sub.add_parser("keygen", help="issue group parameters and a batch of credentials")
    k.add_argument("--threshold", type=int, required=True)
    k.add_argument("--members", type=int, required=True)
    k.add_argument("--group", choices=("curve", "toy"), default="curve")
    k.add_argument("--toy-order", type=int, default=31)
    k.add_argument("--seed", type=int, help=f"defaults to ${SEED_ENV}, then 0")
    k.add_argument("--out", required=True)
    k.set_defaults(func=cmd_keygen)

    r = sub.add_parser("run", help="simulate one scenario from a JSON config")
    r.add_argument("--config", required=True)
    r.add_argument("--trace", help="write the event trace as CSV")
    r.add_argument("--model", help="latency model override (JSON)")
    r.set_defaults(func=cmd_run)

    c = sub.add_parser("compare", help="write latency curves and crossover table")
    c.add_argument("--max-threshold", type=int, default=100)
    c.add_argument("--max-drones", type=int, default=200)
    c.add_argument("--swarm-threshold", type=int, default=5)
    c.add_argument("--model", help="latency model override (JSON)")
    c.add_argument("--out", required=True)
    c.set_defaults(func=cmd_compare)

    o = sub.add_parser("oracle", help="check curve arithmetic against the toy-group oracle")
    o.add_argument("--selftest", action="store_true")
    o.add_argument("--trials", type=int, default=1000)
    o.add_argument("--seed", type=int)
    o.set_defaults(func=cmd_oracle)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ConfigurationError, GroupAuthError, ValueError, TypeError) as exc:
        print(f"swarmauth: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
