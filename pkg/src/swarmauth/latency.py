"""Analytical latency model for 5G NR versus group authentication.

All times are milliseconds.  The defaults are the measured constants the
comparison is built on; every total below is a linear combination of them.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
import os
from dataclasses import dataclass
from pathlib import Path

from .trace import HopType, Outcome, ScenarioTrace, TraceRow

TOLERANCE_MS = 1e-9


@dataclass(frozen=True)
class LatencyModel:
    # one counted UE<->core transmission; 8 of them make up the 82 ms total
    ue_core_transmission: float = 10.0
    asym_encrypt: float = 0.1
    core_decrypt: float = 1.5
    drone_hop: float = 0.6
    ec_scalar_mult: float = 0.612
    nr_handover_total: float = 50.0
    nr_auth_transmissions: int = 8

    def __post_init__(self):
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise TypeError(f"{f.name} must be a number")
            if value < 0 or not math.isfinite(value):
                raise ValueError(f"{f.name} must be finite and non-negative, got {value}")
        if int(self.nr_auth_transmissions) != self.nr_auth_transmissions:
            raise ValueError("nr_auth_transmissions must be an integer")

    def to_json(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> LatencyModel:
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown latency model fields: {sorted(unknown)}")
        return cls(**data)


DEFAULT_MODEL = LatencyModel()


def load_model(path: str | os.PathLike | None) -> LatencyModel:
    if path is None:
        return DEFAULT_MODEL
    return LatencyModel.from_json(json.loads(Path(path).read_text()))


# symmetric crypto and hashing are below the model's resolution
ZERO_COST_OPS = frozenset({"hash", "wrap_key", "unwrap_ok", "unwrap_failed"})


def compute_cost(op: str, model: LatencyModel = DEFAULT_MODEL) -> float:
    if op == "ec_scalar_mult":
        return model.ec_scalar_mult
    if op == "asym_encrypt":
        return model.asym_encrypt
    if op == "core_decrypt":
        return model.core_decrypt
    if op in ZERO_COST_OPS:
        return 0.0
    raise KeyError(f"no cost defined for local operation {op!r}")


def hop_cost(hop: HopType, model: LatencyModel = DEFAULT_MODEL) -> float:
    if hop is HopType.DRONE:
        return model.drone_hop
    if hop is HopType.UE_CORE:
        return model.ue_core_transmission
    if hop is HopType.CORE:
        # core-internal forwarding is folded into the UE<->core constant
        return 0.0
    raise KeyError(f"{hop} is not a transmission")


def row_cost(row: TraceRow, model: LatencyModel = DEFAULT_MODEL) -> float:
    if row.hop_type is HopType.COMPUTE:
        return compute_cost(row.msg_type, model)
    return hop_cost(row.hop_type, model)


# -- closed forms -------------------------------------------------------------


def nr_auth_latency(model: LatencyModel = DEFAULT_MODEL) -> float:
    return model.nr_auth_transmissions * model.ue_core_transmission + model.asym_encrypt + model.core_decrypt


def group_auth_latency(m: int, model: LatencyModel = DEFAULT_MODEL) -> float:
    """m data exchanges plus m scalar multiplications on the verifier's path."""
    return m * (model.drone_hop + model.ec_scalar_mult)


def swarm_auth_latency(n: int, m: int, model: LatencyModel = DEFAULT_MODEL) -> float:
    return n * model.drone_hop + group_auth_latency(m, model)


def proposed_handover_latency(m: int, model: LatencyModel = DEFAULT_MODEL) -> float:
    return group_auth_latency(m, model)


def nr_handover_latency(model: LatencyModel = DEFAULT_MODEL) -> float:
    return model.nr_handover_total


def key_delivery_latency(model: LatencyModel = DEFAULT_MODEL) -> float:
    # sender derives the pairwise key, two messages, receiver derives it too
    return 2 * (model.drone_hop + model.ec_scalar_mult)


def crossover_threshold(baseline_ms: float, per_unit_ms: float, offset_ms: float = 0.0) -> int:
    """Largest integer k with ``offset + k * per_unit < baseline`` (-1 if none)."""
    if per_unit_ms <= 0:
        raise ValueError("per-unit cost must be positive")
    k = math.floor((baseline_ms - offset_ms) / per_unit_ms)
    while k >= 0 and offset_ms + k * per_unit_ms >= baseline_ms:
        k -= 1
    while offset_ms + (k + 1) * per_unit_ms < baseline_ms:
        k += 1
    return max(k, -1)


def auth_crossover(model: LatencyModel = DEFAULT_MODEL) -> int:
    return crossover_threshold(nr_auth_latency(model), group_auth_latency(1, model))


def handover_crossover(model: LatencyModel = DEFAULT_MODEL) -> int:
    return crossover_threshold(nr_handover_latency(model), group_auth_latency(1, model))


def swarm_crossover(m: int = 5, model: LatencyModel = DEFAULT_MODEL) -> int:
    """Largest drone count n for which a swarm join at threshold m beats NR."""
    return crossover_threshold(nr_auth_latency(model), model.drone_hop, group_auth_latency(m, model))


def crossover_table(model: LatencyModel = DEFAULT_MODEL, swarm_threshold: int = 5) -> dict[str, int]:
    return {
        "auth": auth_crossover(model),
        "handover": handover_crossover(model),
        "swarm": swarm_crossover(swarm_threshold, model),
    }


# -- scenario traces ----------------------------------------------------------


SCENARIOS = ("join", "terrestrial_handover", "aerial_handover", "nr_baseline")


def scenario_latency(
    scenario: str, m: int, outcome: Outcome, model: LatencyModel = DEFAULT_MODEL
) -> float:
    """Closed-form total for one simulated scenario run.

    Every honest run costs a group authentication plus a key delivery.  A
    rejection replaces key delivery with one Reject message (for the
    terrestrial handover the Reject *is* the verdict message, so nothing is
    added).  When the sum check passes but the receiver holds no private
    share, it never performs its scalar multiplication.
    """
    if scenario == "nr_baseline":
        return nr_auth_latency(model)
    if scenario not in SCENARIOS:
        raise ValueError(f"unknown scenario {scenario!r}")
    auth = group_auth_latency(m, model)
    if outcome is Outcome.ACCEPTED:
        return auth + key_delivery_latency(model)
    if outcome in (Outcome.KEY_REFUSED, Outcome.COMPROMISED):
        return auth + key_delivery_latency(model) - model.ec_scalar_mult
    if outcome is Outcome.REJECTED:
        return auth if scenario == "terrestrial_handover" else auth + model.drone_hop
    raise ValueError(f"no closed form for outcome {outcome!r}")


def trace_cost(rows: list[TraceRow], model: LatencyModel = DEFAULT_MODEL) -> float:
    return math.fsum(row_cost(r, model) for r in rows)


def validate_trace_against_model(trace: ScenarioTrace, model: LatencyModel = DEFAULT_MODEL) -> bool:
    """Check a simulated trace against the analytical model.

    The summed per-row costs must equal both the trace's own end time and the
    closed form for its scenario and outcome.
    """
    if not trace.is_monotone():
        return False
    summed = trace_cost(trace.rows, model)
    if abs(summed - trace.total_ms) > TOLERANCE_MS:
        return False
    if not trace.scenario:
        expected = 0.0
    else:
        expected = scenario_latency(trace.scenario, trace.threshold, trace.outcome, model)
    return abs(summed - expected) <= TOLERANCE_MS


# -- latency curves -------------------------------------------------------------


@dataclass(frozen=True)
class LatencyCurve:
    name: str
    variable: str
    points: tuple[int, ...]
    proposed_ms: tuple[float, ...]
    nr_ms: tuple[float, ...]

    def rows(self) -> list[tuple[int, float, float]]:
        return list(zip(self.points, self.proposed_ms, self.nr_ms))


def latency_curves(
    max_threshold: int = 100,
    max_drones: int = 200,
    swarm_threshold: int = 5,
    model: LatencyModel = DEFAULT_MODEL,
) -> dict[str, LatencyCurve]:
    """Proposed-vs-NR curves: join auth by m, swarm auth by n, handover by m."""
    ms = tuple(range(1, max_threshold + 1))
    ns = tuple(range(1, max_drones + 1))
    return {
        "auth_latency": LatencyCurve(
            "auth_latency", "m", ms,
            tuple(group_auth_latency(m, model) for m in ms),
            tuple(nr_auth_latency(model) for _ in ms),
        ),
        "swarm_latency": LatencyCurve(
            "swarm_latency", "n", ns,
            tuple(swarm_auth_latency(n, swarm_threshold, model) for n in ns),
            tuple(nr_auth_latency(model) for _ in ns),
        ),
        "handover_latency": LatencyCurve(
            "handover_latency", "m", ms,
            tuple(proposed_handover_latency(m, model) for m in ms),
            tuple(nr_handover_latency(model) for _ in ms),
        ),
    }


CURVE_COLUMNS = ["variable", "value_ms_proposed", "value_ms_nr"]


def write_curve_csv(curve: LatencyCurve, path: str | os.PathLike) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CURVE_COLUMNS)
        for x, prop, nr in curve.rows():
            w.writerow([x, repr(prop), repr(nr)])


def read_curve_csv(path: str | os.PathLike) -> list[tuple[int, float, float]]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CURVE_COLUMNS:
            raise ValueError(f"unexpected curve columns {reader.fieldnames}")
        return [
            (int(r["variable"]), float(r["value_ms_proposed"]), float(r["value_ms_nr"]))
            for r in reader
        ]
