"""Drivers for the three swarm scenarios.

Each driver wires actors onto a :class:`~swarmauth.sim.SimNet`, kicks off the
first message, drains the event queue and labels the resulting trace.
"""

from __future__ import annotations

import random

from ..groupauth import Credential, PublicPair
from ..sim import SimNet
from ..trace import Outcome, ScenarioTrace
from .actors import (
    AerialNetworkDrone,
    Guard,
    KeyReceiver,
    Newcomer,
    NewUxNB,
    TargetBS,
    TerrestrialNetworkDrone,
)
from .adversary import Impostor
from .swarm import ConfigurationError, Drone, DroneRole, SwarmState


def _require_swarm_side(m: int) -> None:
    if m < 2:
        raise ConfigurationError("scenarios need threshold >= 2 so the swarm side is non-empty")


def _identity(party: Credential | Impostor) -> dict:
    if isinstance(party, Impostor):
        return {"pair": party.pair}
    if isinstance(party, Credential):
        return {"credential": party}
    raise TypeError(f"expected a Credential or an Impostor, got {type(party).__name__}")


def _finish(trace: ScenarioTrace, scenario: str, m: int, receiver: KeyReceiver, auth_passed: bool) -> ScenarioTrace:
    trace.scenario = scenario
    trace.threshold = m
    trace.auth_passed = auth_passed
    trace.obtained_key = receiver.group_key
    if receiver.group_key is not None and receiver.credential is None:
        trace.outcome = Outcome.COMPROMISED
    elif receiver.group_key is not None:
        trace.outcome = Outcome.ACCEPTED
    elif auth_passed and receiver.wrapped is not None:
        trace.outcome = Outcome.KEY_REFUSED
    else:
        trace.outcome = Outcome.REJECTED
    return trace


def run_join_scenario(
    swarm: SwarmState,
    newcomer: Credential | Impostor,
    net: SimNet | None = None,
    rng: random.Random | None = None,
    newcomer_id: str = "newcomer",
) -> ScenarioTrace:
    """A new drone asks the guards to let it in.

    The m-1 lowest-index guards take part; the lowest of them delivers the
    group key.  An honest newcomer that gets the key is admitted to the swarm
    as a service drone.
    """
    params = swarm.params
    m = params.threshold
    _require_swarm_side(m)
    guards = swarm.by_role(DroneRole.GUARD)
    if len(guards) < m - 1:
        raise ConfigurationError(f"join needs at least {m - 1} guard drones, swarm has {len(guards)}")
    guards = guards[: m - 1]
    net = net or SimNet()
    rng = rng or random.Random(0)
    guard_ids = [g.drone_id for g in guards]
    actors = [
        Guard(
            g.drone_id, net, params, rng,
            credential=g.credential,
            group_key=g.group_key,
            peers=guard_ids,
            designated=(i == 0),
        )
        for i, g in enumerate(guards)
    ]
    joiner = Newcomer(newcomer_id, net, params, rng, guards=guard_ids, **_identity(newcomer))
    joiner.start()
    trace = net.run_until_idle()
    auth_passed = all(a.verdict for a in actors)
    trace = _finish(trace, "join", m, joiner, auth_passed)
    if trace.outcome is Outcome.ACCEPTED and isinstance(newcomer, Credential):
        swarm.admit(Drone(swarm.next_id(DroneRole.SERVICE), DroneRole.SERVICE, newcomer, joiner.group_key))
    return trace


def _network_drones(swarm: SwarmState) -> list[Drone]:
    m = swarm.params.threshold
    _require_swarm_side(m)
    drones = swarm.by_role(DroneRole.NETWORK)
    if len(drones) != m - 1:
        raise ConfigurationError(
            f"handover needs exactly {m - 1} network drones (threshold minus one), swarm has {len(drones)}"
        )
    return drones


def run_terrestrial_handover(
    swarm: SwarmState,
    target_bs: Credential | Impostor,
    net: SimNet | None = None,
    rng: random.Random | None = None,
    bs_id: str = "t-bs",
) -> ScenarioTrace:
    """Network drones present their pairs to the target BS, which verifies them."""
    params = swarm.params
    drones = _network_drones(swarm)
    net = net or SimNet()
    rng = rng or random.Random(0)
    ids = [d.drone_id for d in drones]
    actors = [
        TerrestrialNetworkDrone(
            d.drone_id, net, params, rng,
            credential=d.credential,
            group_key=d.group_key,
            bs_id=bs_id,
            designated=(i == 0),
        )
        for i, d in enumerate(drones)
    ]
    bs = TargetBS(bs_id, net, params, rng, network=ids, **_identity(target_bs))
    for a in actors:
        a.start()
    trace = net.run_until_idle()
    return _finish(trace, "terrestrial_handover", params.threshold, bs, bool(bs.verdict))


def run_aerial_handover(
    swarm: SwarmState,
    new_uxnb: Credential | Impostor,
    net: SimNet | None = None,
    rng: random.Random | None = None,
    bs_id: str = "uxnb-new",
) -> ScenarioTrace:
    """A new UxNB presents its pair; every network drone verifies it."""
    params = swarm.params
    drones = _network_drones(swarm)
    net = net or SimNet()
    rng = rng or random.Random(0)
    ids = [d.drone_id for d in drones]
    pairs = [d.public for d in drones]
    actors = [
        AerialNetworkDrone(
            d.drone_id, net, params, rng,
            credential=d.credential,
            group_key=d.group_key,
            peers=ids,
            peer_pairs=pairs,
            designated=(i == 0),
        )
        for i, d in enumerate(drones)
    ]
    bs = NewUxNB(bs_id, net, params, rng, network=ids, **_identity(new_uxnb))
    bs.start()
    trace = net.run_until_idle()
    auth_passed = all(a.verdict for a in actors)
    return _finish(trace, "aerial_handover", params.threshold, bs, auth_passed)


def expected_message_counts(scenario: str, m: int, outcome: Outcome) -> dict[str, int]:
    """Message tally for one run, as a function of the threshold."""
    delivered = outcome in (Outcome.ACCEPTED, Outcome.KEY_REFUSED, Outcome.COMPROMISED)
    key = {"KeyAgreementInit": 1, "WrappedKeyDelivery": 1} if delivered else {"Reject": 1}
    if scenario == "join":
        base = {"JoinRequest": 1, "PublicPairAnnounce": m - 1}
    elif scenario == "terrestrial_handover":
        base = {"HandoverPublicPairs": m - 1}
        if delivered:
            base["AuthVerdict"] = 1
    elif scenario == "aerial_handover":
        base = {"BsPublicPair": 1, "AuthVerdict": m - 1}
    else:
        raise ValueError(f"unknown scenario {scenario!r}")
    return {**base, **key}


def message_counts(trace: ScenarioTrace) -> dict[str, int]:
    out: dict[str, int] = {}
    for row in trace.message_rows():
        out[row.msg_type] = out.get(row.msg_type, 0) + 1
    return out
