"""Adversaries that hold only public data.

An impostor replays a public pair captured from an earlier honest session
(or forges one).  It has no private share, so when the swarm hands it a
wrapped group key the best it can do is try every key it can build from what
it overheard.  On a real curve that never works; on the toy group the private
share is its own discrete log, so :func:`brute_force_shares` recovers it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from ..algebra import Group, GroupElement, ToyGroup
from ..groupauth import (
    GroupAuthError,
    GroupParams,
    PublicPair,
    UnwrapError,
    WrappedGroupKey,
    kdf,
    unwrap_group_key,
)
from ..trace import ScenarioTrace
from .messages import Message, decode, public_pairs_in


@dataclass(frozen=True)
class Impostor:
    """Stand-in for a participant that knows a public pair and nothing else."""

    pair: PublicPair
    kind: str = "replay"


def capture_pair(trace: ScenarioTrace, msg_type: str, group: Group) -> PublicPair:
    """Lift the first public pair carried by ``msg_type`` out of a finished trace.

    The pair is decoded from the message's wire bytes, as an eavesdropper
    would see it.
    """
    for msg in trace.messages:
        if msg.msg_type == msg_type:
            pairs = public_pairs_in(decode(msg.encode(), group))
            if pairs:
                return pairs[0]
    raise LookupError(f"no {msg_type} carrying a public pair in the trace")


def replay_adversary(captured: PublicPair) -> Impostor:
    return Impostor(captured, "replay")


def fake_bs_adversary(captured: PublicPair) -> Impostor:
    return Impostor(captured, "fake_bs")


def forged_adversary(index: int, group: Group, rng: random.Random) -> Impostor:
    """Fresh index with a uniformly random point: fails the sum check w.p. 1 - 1/q."""
    return Impostor(PublicPair(index, group.random_element(rng)), "forged")


def observed_points(messages: Iterable[Message], params: GroupParams) -> list[GroupElement]:
    seen: dict[bytes, GroupElement] = {}
    for point in (params.generator, params.verification_point):
        seen.setdefault(point.to_bytes(), point)
    for msg in messages:
        for pair in public_pairs_in(msg):
            seen.setdefault(pair.public_point.to_bytes(), pair.public_point)
    return list(seen.values())


def observed_key_candidates(messages: Sequence[Message], params: GroupParams) -> list[bytes]:
    """Keys reachable from overheard points without solving a discrete log.

    Covers every observed point and every sum and difference of two of them.
    """
    points = observed_points(messages, params)
    candidates = [p for p in points]
    for i, a in enumerate(points):
        for b in points[i + 1 :]:
            candidates.append(a + b)
            candidates.append(a - b)
    keys: dict[bytes, None] = {}
    for c in candidates:
        keys.setdefault(kdf(c), None)
    return list(keys)


def try_keys(keys: Iterable[bytes], wrapped: WrappedGroupKey) -> int | None:
    for key in keys:
        try:
            return unwrap_group_key(key, wrapped)
        except UnwrapError:
            continue
    return None


def brute_force_shares(
    wrapped: WrappedGroupKey, peer_point: GroupElement, group: ToyGroup
) -> list[int]:
    """Every candidate private share that opens ``wrapped`` (toy group only)."""
    if not isinstance(group, ToyGroup):
        raise GroupAuthError("exhaustive search is only meant for the toy group")
    hits = []
    for s in range(group.order):
        try:
            unwrap_group_key(kdf(group.mul(s, peer_point)), wrapped)
        except UnwrapError:
            continue
        hits.append(s)
    return hits
