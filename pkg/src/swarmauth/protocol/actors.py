"""Per-role state machines.

Each actor reacts only to delivered messages and to completion of its own
local computations.  Messages that arrive early are kept until the actor has
what it needs; messages that make no sense in the current state are recorded
in ``ignored`` and otherwise dropped.  No actor decides before it holds the
full set of inputs for that decision.
"""

from __future__ import annotations

import logging
import random
from typing import Callable, Sequence

from ..groupauth import (
    Credential,
    GroupAuthError,
    GroupParams,
    PublicPair,
    UnwrapError,
    WrappedGroupKey,
    compute_contribution,
    contribution_from_public,
    derive_pairwise_key,
    unwrap_group_key,
    verify_group,
    wrap_group_key,
)
from ..sim import BROADCAST, SimNet
from .adversary import observed_key_candidates, try_keys
from .messages import (
    AuthVerdict,
    BsPublicPair,
    HandoverPublicPairs,
    JoinRequest,
    KeyAgreementInit,
    Message,
    PublicPairAnnounce,
    Reject,
    WrappedKeyDelivery,
)

log = logging.getLogger(__name__)

MULT = "ec_scalar_mult"


class Participant:
    def __init__(
        self,
        actor_id: str,
        net: SimNet,
        params: GroupParams,
        rng: random.Random,
        credential: Credential | None = None,
        pair: PublicPair | None = None,
    ):
        if credential is None and pair is None:
            raise ValueError("participant needs a credential or a public pair")
        self.actor_id = actor_id
        self.net = net
        self.params = params
        self.rng = rng
        self.credential = credential
        self.pair = credential.public if credential is not None else pair
        self.ignored: list[Message] = []
        net.attach(self)

    def receive(self, msg: Message) -> None:
        handler = getattr(self, "on_" + msg.msg_type, None)
        if handler is None:
            self.ignored.append(msg)
            return
        handler(msg)

    def _contribution(self, pair: PublicPair, indices: list[int]):
        cred = self.credential
        if cred is not None and pair.index == cred.index and pair.public_point == cred.public_point:
            return compute_contribution(cred, indices, self.params)
        return contribution_from_public(pair, indices, self.params)

    def run_sum_check(self, pairs: Sequence[PublicPair], done: Callable[[bool], None]) -> None:
        """One scalar multiplication per member, then compare the sum with Q."""
        pairs = list(pairs)
        indices = [p.index for p in pairs]
        if len(set(indices)) != len(indices) or len(pairs) != self.params.threshold:
            # a colliding or short index set cannot be interpolated
            self.net.schedule(0, done, False)
            return
        contributions = []

        def step(i: int) -> None:
            if i == len(pairs):
                done(verify_group(contributions, self.params))
                return

            def after() -> None:
                contributions.append(self._contribution(pairs[i], indices))
                step(i + 1)

            self.net.compute(self.actor_id, MULT, after)

        step(0)


class KeyReceiver(Participant):
    """Side that ends up with the wrapped group key: newcomer or new BS."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.peer_pair: PublicPair | None = None
        self.wrapped: WrappedGroupKey | None = None
        self.group_key: int | None = None
        self.rejected = False
        self.observed: list[Message] = []
        net = self.net
        if self.credential is None:
            net.tap(self.observed.append)

    def on_KeyAgreementInit(self, msg: Message) -> None:
        if self.peer_pair is not None:
            self.ignored.append(msg)
            return
        self.peer_pair = msg.pair
        self._maybe_open()

    def on_WrappedKeyDelivery(self, msg: Message) -> None:
        if self.wrapped is not None:
            self.ignored.append(msg)
            return
        self.wrapped = msg.wrapped
        self._maybe_open()

    def on_Reject(self, msg: Message) -> None:
        self.rejected = True

    def _maybe_open(self) -> None:
        if self.peer_pair is None or self.wrapped is None:
            return
        if self.credential is None:
            self._open_without_share()
        else:
            self.net.compute(self.actor_id, MULT, self._open)

    def _open(self) -> None:
        try:
            key = derive_pairwise_key(self.credential, self.peer_pair, self.params)
            self.group_key = unwrap_group_key(key, self.wrapped)
        except (UnwrapError, GroupAuthError):
            self.net.note(self.actor_id, "unwrap_failed")
            return
        self.net.note(self.actor_id, "unwrap_ok")

    def _open_without_share(self) -> None:
        self.attempted_keys = observed_key_candidates(self.observed, self.params)
        got = try_keys(self.attempted_keys, self.wrapped)
        if got is None:
            self.net.note(self.actor_id, "unwrap_failed")
            return
        self.group_key = got
        self.net.note(self.actor_id, "unwrap_ok")


class KeySender(Participant):
    """Swarm member that wraps the group key for a freshly verified party."""

    def __init__(self, *args, group_key: int, **kwargs):
        super().__init__(*args, **kwargs)
        self._group_key = group_key
        self.delivered_to: str | None = None

    def deliver_key(self, receiver: str, their: PublicPair) -> None:
        def after() -> None:
            try:
                key = derive_pairwise_key(self.credential, their, self.params)
            except GroupAuthError as exc:
                self.net.send(Reject(self.actor_id, receiver, str(exc)))
                return
            wrapped = wrap_group_key(key, self._group_key, self.rng)
            self.net.note(self.actor_id, "wrap_key")
            self.net.send(KeyAgreementInit(self.actor_id, receiver, self.credential.public))
            self.net.send(WrappedKeyDelivery(self.actor_id, receiver, wrapped))
            self.delivered_to = receiver

        self.net.compute(self.actor_id, MULT, after)


# -- scenario I: new drone joins ------------------------------------------------


class Newcomer(KeyReceiver):
    def __init__(self, *args, guards: Sequence[str], **kwargs):
        super().__init__(*args, **kwargs)
        self.guards = list(guards)
        self.announced: dict[str, PublicPair] = {}

    def start(self) -> None:
        self.net.send(JoinRequest(self.actor_id, BROADCAST, self.pair), recipients=self.guards)

    def on_PublicPairAnnounce(self, msg: Message) -> None:
        self.announced[msg.sender] = msg.pair


class Guard(KeySender):
    def __init__(self, *args, peers: Sequence[str], designated: bool, **kwargs):
        super().__init__(*args, **kwargs)
        self.peers = list(peers)  # participating guards, self included
        self.designated = designated
        self.newcomer: tuple[str, PublicPair] | None = None
        self.guard_pairs: dict[str, PublicPair] = {}
        self.started = False
        self.verdict: bool | None = None

    def on_JoinRequest(self, msg: Message) -> None:
        if self.newcomer is not None:
            self.ignored.append(msg)
            return
        self.newcomer = (msg.sender, msg.pair)
        self.net.send(
            PublicPairAnnounce(self.actor_id, BROADCAST, self.credential.public),
            recipients=[msg.sender, *self.peers],
        )
        self._maybe_verify()

    def on_PublicPairAnnounce(self, msg: Message) -> None:
        if msg.sender not in self.peers:
            self.ignored.append(msg)
            return
        self.guard_pairs[msg.sender] = msg.pair
        self._maybe_verify()

    def _maybe_verify(self) -> None:
        if self.started or self.newcomer is None or len(self.guard_pairs) < len(self.peers):
            return
        self.started = True
        pairs = sorted(self.guard_pairs.values(), key=lambda p: p.index)
        self.run_sum_check([*pairs, self.newcomer[1]], self._decided)

    def _decided(self, ok: bool) -> None:
        self.verdict = ok
        if not self.designated:
            return
        who, pair = self.newcomer
        if ok:
            self.deliver_key(who, pair)
        else:
            self.net.send(Reject(self.actor_id, who, "group authentication failed"))


# -- scenario II: terrestrial BS handover ---------------------------------------


class TerrestrialNetworkDrone(KeySender):
    def __init__(self, *args, bs_id: str, designated: bool, **kwargs):
        super().__init__(*args, **kwargs)
        self.bs_id = bs_id
        self.designated = designated
        self.bs_verdict: bool | None = None

    def start(self) -> None:
        self.net.send(HandoverPublicPairs(self.actor_id, self.bs_id, (self.credential.public,)))

    def on_AuthVerdict(self, msg: Message) -> None:
        if msg.sender != self.bs_id or self.bs_verdict is not None:
            self.ignored.append(msg)
            return
        self.bs_verdict = msg.accepted
        if msg.accepted and self.designated:
            if msg.verifier_pair is None:
                self.ignored.append(msg)
                return
            self.deliver_key(self.bs_id, msg.verifier_pair)

    def on_Reject(self, msg: Message) -> None:
        if msg.sender == self.bs_id:
            self.bs_verdict = False


class TargetBS(KeyReceiver):
    def __init__(self, *args, network: Sequence[str], **kwargs):
        super().__init__(*args, **kwargs)
        self.network = list(network)
        self.drone_pairs: dict[str, PublicPair] = {}
        self.started = False
        self.verdict: bool | None = None

    def on_HandoverPublicPairs(self, msg: Message) -> None:
        if msg.sender not in self.network or msg.sender in self.drone_pairs or len(msg.pairs) != 1:
            self.ignored.append(msg)
            return
        self.drone_pairs[msg.sender] = msg.pairs[0]
        if not self.started and len(self.drone_pairs) == len(self.network):
            self.started = True
            pairs = sorted(self.drone_pairs.values(), key=lambda p: p.index)
            self.run_sum_check([*pairs, self.pair], self._decided)

    def _decided(self, ok: bool) -> None:
        self.verdict = ok
        if ok:
            self.net.send(
                AuthVerdict(self.actor_id, BROADCAST, True, self.pair), recipients=self.network
            )
        else:
            self.net.send(
                Reject(self.actor_id, BROADCAST, "group authentication failed"),
                recipients=self.network,
            )


# -- scenario III: aerial BS (UxNB) handover ------------------------------------


class NewUxNB(KeyReceiver):
    def __init__(self, *args, network: Sequence[str], **kwargs):
        super().__init__(*args, **kwargs)
        self.network = list(network)
        self.votes: dict[str, bool] = {}

    def start(self) -> None:
        self.net.send(BsPublicPair(self.actor_id, BROADCAST, self.pair), recipients=self.network)

    def on_AuthVerdict(self, msg: Message) -> None:
        self.votes[msg.sender] = msg.accepted


class AerialNetworkDrone(KeySender):
    def __init__(
        self, *args, peers: Sequence[str], peer_pairs: Sequence[PublicPair], designated: bool, **kwargs
    ):
        super().__init__(*args, **kwargs)
        self.peers = list(peers)  # network drones, self included
        self.peer_pairs = sorted(peer_pairs, key=lambda p: p.index)
        self.designated = designated
        self.bs: tuple[str, PublicPair] | None = None
        self.verdict: bool | None = None
        self.votes: dict[str, bool] = {}
        self.closed = False

    def on_BsPublicPair(self, msg: Message) -> None:
        if self.bs is not None:
            self.ignored.append(msg)
            return
        self.bs = (msg.sender, msg.pair)
        self.run_sum_check([*self.peer_pairs, msg.pair], self._decided)

    def _decided(self, ok: bool) -> None:
        self.verdict = ok
        self.net.send(
            AuthVerdict(self.actor_id, BROADCAST, ok),
            recipients=[self.bs[0], *self.peers],
        )
        self._maybe_close()

    def on_AuthVerdict(self, msg: Message) -> None:
        if msg.sender not in self.peers or msg.sender in self.votes:
            self.ignored.append(msg)
            return
        self.votes[msg.sender] = msg.accepted
        self._maybe_close()

    def _maybe_close(self) -> None:
        if not self.designated or self.closed or self.verdict is None:
            return
        if len(self.votes) < len(self.peers):
            return
        self.closed = True
        who, pair = self.bs
        if all(self.votes.values()):
            self.deliver_key(who, pair)
        else:
            self.net.send(Reject(self.actor_id, who, "network drones did not all accept"))
