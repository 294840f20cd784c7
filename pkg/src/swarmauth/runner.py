"""Scenario configs, one-shot runs and the report printed by ``swarmauth run``."""

from __future__ import annotations

import dataclasses
import json
import os
import random
from dataclasses import dataclass, field
from pathlib import Path

from .algebra import make_group
from .groupauth import ControlStation
from .latency import DEFAULT_MODEL, SCENARIOS, LatencyModel, scenario_latency, validate_trace_against_model
from .protocol.adversary import capture_pair, fake_bs_adversary, replay_adversary
from .protocol.baseline import run_nr_baseline_auth
from .protocol.scenarios import run_aerial_handover, run_join_scenario, run_terrestrial_handover
from .protocol.swarm import SwarmState, build_swarm
from .sim import SimNet
from .trace import Outcome, ScenarioTrace, write_trace_csv

SEED_ENV = "SWARMAUTH_SEED"

EXIT_ACCEPT = 0
EXIT_USAGE = 1
EXIT_REJECT = 2
EXIT_COMPROMISED = 3

# which adversary makes sense where, and which honest message it replays
ADVERSARIES = {
    "join": {"none", "replay"},
    "terrestrial_handover": {"none", "fake_bs"},
    "aerial_handover": {"none", "fake_bs"},
    "nr_baseline": {"none"},
}
CAPTURED_FROM = {
    "join": "JoinRequest",
    "terrestrial_handover": "AuthVerdict",
    "aerial_handover": "BsPublicPair",
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    m: int = 3
    guard_count: int | None = None
    network_count: int | None = None
    service_count: int = 0
    adversary: str = "none"
    seed: int | None = None
    group: str = "curve"
    toy_order: int = 31

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"scenario must be one of {SCENARIOS}, got {self.scenario!r}")
        for name in ("m", "service_count", "toy_order"):
            _require_int(name, getattr(self, name))
        for name in ("guard_count", "network_count", "seed"):
            if getattr(self, name) is not None:
                _require_int(name, getattr(self, name))
        if self.scenario != "nr_baseline" and self.m < 2:
            raise ConfigError("threshold m must be at least 2")
        if min(self.guard_count or 0, self.network_count or 0, self.service_count) < 0:
            raise ConfigError("drone counts must be non-negative")
        if self.group not in ("curve", "toy"):
            raise ConfigError(f"group must be 'curve' or 'toy', got {self.group!r}")
        if self.adversary not in ADVERSARIES[self.scenario]:
            raise ConfigError(
                f"adversary {self.adversary!r} is not defined for {self.scenario}; "
                f"choose from {sorted(ADVERSARIES[self.scenario])}"
            )

    @property
    def guards(self) -> int:
        if self.guard_count is not None:
            return self.guard_count
        return self.m - 1 if self.scenario == "join" else 0

    @property
    def network(self) -> int:
        if self.network_count is not None:
            return self.network_count
        return self.m - 1 if self.scenario.endswith("handover") else 0

    def resolved_seed(self) -> int:
        if self.seed is not None:
            return self.seed
        env = os.environ.get(SEED_ENV)
        if env is None:
            return 0
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"{SEED_ENV} must be an integer, got {env!r}") from None

    def to_json(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_json(cls, data) -> ScenarioConfig:
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        if "scenario" not in data:
            raise ConfigError("config needs a 'scenario' field")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None


def _require_int(name: str, value) -> None:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ConfigError(f"{name} must be an integer, got {value!r}")


def load_config(path: str | os.PathLike) -> ScenarioConfig:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return ScenarioConfig.from_json(data)


@dataclass
class RunReport:
    scenario: str
    config: dict
    verdict: str
    outcome: str
    total_ms: float
    closed_form_ms: float
    model_consistent: bool
    auth_passed: bool | None
    trace_path: str | None = None
    messages: dict[str, int] = field(default_factory=dict)

    @property
    def exit_code(self) -> int:
        if self.outcome == Outcome.COMPROMISED.value:
            return EXIT_COMPROMISED
        return EXIT_ACCEPT if self.verdict == "accept" else EXIT_REJECT

    def to_json(self) -> dict:
        return dataclasses.asdict(self)


@dataclass
class RunResult:
    report: RunReport
    trace: ScenarioTrace
    group_key: int | None = None


_DRIVERS = {
    "join": run_join_scenario,
    "terrestrial_handover": run_terrestrial_handover,
    "aerial_handover": run_aerial_handover,
}


def _run_swarm_scenario(config: ScenarioConfig, model: LatencyModel, rng: random.Random):
    group = make_group(config.group, config.toy_order)
    station = ControlStation(group, config.m, rng)
    swarm: SwarmState = build_swarm(station, config.guards, config.network, config.service_count)
    drive = _DRIVERS[config.scenario]
    if config.adversary == "none":
        return drive(swarm, station.issue_one(), SimNet(model), rng), station.group_key
    # let an honest session happen first so the adversary has something to copy
    honest = drive(swarm, station.issue_one(), SimNet(model), rng)
    captured = capture_pair(honest, CAPTURED_FROM[config.scenario], group)
    make = replay_adversary if config.adversary == "replay" else fake_bs_adversary
    return drive(swarm, make(captured), SimNet(model), rng), station.group_key


def run_config(
    config: ScenarioConfig,
    model: LatencyModel = DEFAULT_MODEL,
    trace_path: str | os.PathLike | None = None,
) -> RunResult:
    rng = random.Random(config.resolved_seed())
    if config.scenario == "nr_baseline":
        trace, group_key = run_nr_baseline_auth(SimNet(model), rng), None
    else:
        trace, group_key = _run_swarm_scenario(config, model, rng)
    if trace_path is not None:
        write_trace_csv(trace.rows, trace_path)
    counts: dict[str, int] = {}
    for row in trace.message_rows():
        counts[row.msg_type] = counts.get(row.msg_type, 0) + 1
    report = RunReport(
        scenario=config.scenario,
        config=config.to_json(),
        verdict="accept" if trace.verdict else "reject",
        outcome=trace.outcome.value,
        total_ms=trace.total_ms,
        closed_form_ms=scenario_latency(config.scenario, config.m, trace.outcome, model),
        model_consistent=validate_trace_against_model(trace, model),
        auth_passed=trace.auth_passed,
        trace_path=None if trace_path is None else str(trace_path),
        messages=counts,
    )
    return RunResult(report, trace, group_key)
