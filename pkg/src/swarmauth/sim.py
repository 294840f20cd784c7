"""Deterministic discrete-event network.

Virtual time only.  Events are ordered by ``(time, insertion sequence)``, so
equal timestamps dispatch FIFO.  All transmissions share one medium and are
serialized on it; local computations occupy only the actor performing them,
so several actors can compute at once.  Identical computations that run in
parallel on different actors collapse into a single trace row whose sender
lists every actor (``guard-1+guard-2``), which keeps the sum of row costs
equal to the elapsed time.
"""

from __future__ import annotations

import heapq
import itertools
import logging
from dataclasses import dataclass
from typing import Any, Callable, Protocol, Sequence

from .latency import DEFAULT_MODEL, LatencyModel, compute_cost, hop_cost
from .trace import HopType, ScenarioTrace, TraceRow

log = logging.getLogger(__name__)

BROADCAST = "*"


class SimError(RuntimeError):
    pass


class Actor(Protocol):
    actor_id: str

    def receive(self, msg: Any) -> None: ...


@dataclass
class _Record:
    start: float
    row: TraceRow


class SimNet:
    def __init__(self, model: LatencyModel = DEFAULT_MODEL):
        self.model = model
        self.now = 0.0
        self._queue: list[tuple[float, int, Callable[..., Any], tuple]] = []
        self._seq = itertools.count()
        self._records: list[_Record] = []
        self._medium_free = 0.0
        self._busy: dict[str, float] = {}
        self.actors: dict[str, Actor] = {}
        self.dispatched = 0
        self.delivered: list[Any] = []
        self._taps: list[Callable[[Any], None]] = []

    # -- scheduling -----------------------------------------------------------

    def schedule(self, delay_ms: float, action: Callable[..., Any], *args: Any) -> int:
        if delay_ms < 0:
            raise SimError(f"negative delay {delay_ms}")
        seq = next(self._seq)
        heapq.heappush(self._queue, (self.now + delay_ms, seq, action, args))
        return seq

    def run_until_idle(self) -> ScenarioTrace:
        while self._queue:
            t, _, action, args = heapq.heappop(self._queue)
            self.now = t
            self.dispatched += 1
            action(*args)
        return ScenarioTrace(rows=self._merged_rows(), messages=list(self.delivered))

    # -- actors ---------------------------------------------------------------

    def attach(self, actor: Actor) -> None:
        if actor.actor_id in self.actors:
            raise SimError(f"duplicate actor id {actor.actor_id!r}")
        self.actors[actor.actor_id] = actor

    def send(
        self,
        msg: Any,
        hop_type: HopType = HopType.DRONE,
        recipients: Sequence[str] | None = None,
    ) -> float:
        """Queue ``msg`` on the shared medium; returns its delivery time.

        ``recipients`` lists the receivers of a broadcast (``msg.receiver`` is
        then ``"*"``); otherwise the message goes to ``msg.receiver`` alone.
        """
        start = max(self.now, self._medium_free)
        done = start + hop_cost(hop_type, self.model)
        self._medium_free = done
        targets = list(recipients) if recipients is not None else [msg.receiver]
        row = TraceRow(done, msg.sender, msg.receiver, msg.msg_type, msg.size_bytes, hop_type)
        self.schedule(done - self.now, self._deliver, msg, targets, _Record(start, row))
        return done

    def tap(self, listener: Callable[[Any], None]) -> None:
        """Register a passive listener that sees every delivered message."""
        self._taps.append(listener)

    def _deliver(self, msg: Any, targets: list[str], record: _Record) -> None:
        self._records.append(record)
        self.delivered.append(msg)
        for listener in self._taps:
            listener(msg)
        for target in targets:
            actor = self.actors.get(target)
            if actor is None:
                log.debug("dropping %s for unknown actor %s", msg.msg_type, target)
                continue
            actor.receive(msg)

    def compute(self, actor_id: str, op: str, then: Callable[..., Any], *args: Any) -> float:
        """Run local operation ``op`` on ``actor_id`` and call ``then`` when it finishes."""
        start = max(self.now, self._busy.get(actor_id, 0.0))
        done = start + compute_cost(op, self.model)
        self._busy[actor_id] = done
        row = TraceRow(done, actor_id, actor_id, op, 0, HopType.COMPUTE)
        self.schedule(done - self.now, self._finish, _Record(start, row), then, args)
        return done

    def note(self, actor_id: str, op: str) -> None:
        """Record a zero-cost local event at the current time."""
        if compute_cost(op, self.model) != 0:
            raise SimError(f"{op} has a cost; use compute()")
        self._records.append(
            _Record(self.now, TraceRow(self.now, actor_id, actor_id, op, 0, HopType.COMPUTE))
        )

    def _finish(self, record: _Record, then: Callable[..., Any], args: tuple) -> None:
        self._records.append(record)
        then(*args)

    def _merged_rows(self) -> list[TraceRow]:
        rows: list[TraceRow] = []
        slot: dict[tuple, int] = {}
        for rec in self._records:
            r = rec.row
            if r.hop_type is not HopType.COMPUTE or r.time_ms == rec.start:
                rows.append(r)
                continue
            key = (rec.start, r.time_ms, r.msg_type)
            if key in slot:
                i = slot[key]
                prev = rows[i]
                names = prev.sender + "+" + r.sender
                rows[i] = TraceRow(prev.time_ms, names, names, prev.msg_type, 0, prev.hop_type)
            else:
                slot[key] = len(rows)
                rows.append(r)
        return rows
