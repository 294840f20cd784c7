"""Scenario traces and their CSV form."""

from __future__ import annotations

import csv
import io
import os
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Iterable

CSV_COLUMNS = ["time_ms", "from", "to", "msg_type", "size_bytes", "hop_type"]


class HopType(str, Enum):
    DRONE = "drone-drone"
    UE_CORE = "ue-core"
    CORE = "core-internal"
    COMPUTE = "local-compute"


class Outcome(str, Enum):
    ACCEPTED = "accepted"
    REJECTED = "rejected"
    # sum check passed but the participant could not open the wrapped group key
    KEY_REFUSED = "key_refused"
    # a participant without a private share opened the group key anyway
    COMPROMISED = "compromised"
    COMPLETED = "completed"


@dataclass(frozen=True)
class TraceRow:
    time_ms: float
    sender: str
    receiver: str
    msg_type: str
    size_bytes: int
    hop_type: HopType

    def as_csv(self) -> list[str]:
        return [
            repr(float(self.time_ms)),
            self.sender,
            self.receiver,
            self.msg_type,
            str(self.size_bytes),
            self.hop_type.value,
        ]

    @classmethod
    def from_csv(cls, rec: dict[str, str]) -> TraceRow:
        return cls(
            float(rec["time_ms"]),
            rec["from"],
            rec["to"],
            rec["msg_type"],
            int(rec["size_bytes"]),
            HopType(rec["hop_type"]),
        )


@dataclass
class ScenarioTrace:
    rows: list[TraceRow] = field(default_factory=list)
    scenario: str = ""
    threshold: int = 0
    outcome: Outcome | None = None
    auth_passed: bool | None = None
    # group key held by the joining party / target BS at the end, if any
    obtained_key: int | None = None
    # message objects in delivery order, for eavesdropper analysis
    messages: list[Any] = field(default_factory=list, repr=False)

    @property
    def verdict(self) -> bool | None:
        if self.outcome is None:
            return None
        return self.outcome in (Outcome.ACCEPTED, Outcome.COMPLETED)

    @property
    def total_ms(self) -> float:
        return self.rows[-1].time_ms if self.rows else 0.0

    def message_rows(self) -> list[TraceRow]:
        return [r for r in self.rows if r.hop_type is not HopType.COMPUTE]

    def count(self, msg_type: str) -> int:
        return sum(1 for r in self.rows if r.msg_type == msg_type)

    def hop_counts(self) -> Counter:
        return Counter(r.hop_type for r in self.rows)

    def is_monotone(self) -> bool:
        return all(a.time_ms <= b.time_ms for a, b in zip(self.rows, self.rows[1:]))


def write_trace_csv(rows: Iterable[TraceRow], dest: str | os.PathLike | io.TextIOBase) -> None:
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w", newline="") as fh:
            write_trace_csv(rows, fh)
        return
    w = csv.writer(dest, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for row in rows:
        w.writerow(row.as_csv())


def read_trace_csv(src: str | os.PathLike | io.TextIOBase) -> list[TraceRow]:
    if isinstance(src, (str, os.PathLike)):
        with open(Path(src), newline="") as fh:
            return read_trace_csv(fh)
    reader = csv.DictReader(src)
    if reader.fieldnames != CSV_COLUMNS:
        raise ValueError(f"unexpected trace columns {reader.fieldnames}")
    return [TraceRow.from_csv(rec) for rec in reader]
