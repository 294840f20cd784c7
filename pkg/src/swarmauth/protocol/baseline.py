"""The 13-step 3GPP UAV authentication, replayed with opaque payloads.

Only the shape matters here: who sends what to whom, and which hops cross
the UE/core boundary.  SUCI, SUPI, RAND and UAS ID are random byte strings.
"""

from __future__ import annotations

import random

from ..sim import SimNet
from ..trace import HopType, Outcome, ScenarioTrace
from .messages import (
    AuthVector,
    ChallengeResponse,
    CsChallenge,
    CsConfirm,
    CsResponse,
    RandChallenge,
    ServiceAccept,
    SuciForward,
    SuciRegistration,
    UasIdForward,
    UasIdRequest,
    UasIdResponse,
)

UAV, AMF, UDM, CS = "uav", "amf", "udm", "control-station"

# (step, kind, what, sender, receiver, hop type, payload size)
BASELINE_STEPS = [
    (1, "compute", "asym_encrypt", UAV, UAV, None, 0),
    (2, "send", SuciRegistration, UAV, AMF, HopType.UE_CORE, 64),
    (3, "send", SuciForward, AMF, UDM, HopType.CORE, 64),
    (4, "compute", "core_decrypt", UDM, UDM, None, 0),
    (5, "compute", "hash", UDM, UDM, None, 0),
    (6, "send", AuthVector, UDM, AMF, HopType.CORE, 48),
    (7, "send", RandChallenge, AMF, UAV, HopType.UE_CORE, 16),
    (8, "compute", "hash", UAV, UAV, None, 0),
    (8, "send", ChallengeResponse, UAV, AMF, HopType.UE_CORE, 32),
    (9, "send", UasIdRequest, AMF, UAV, HopType.UE_CORE, 4),
    (10, "send", UasIdResponse, UAV, AMF, HopType.UE_CORE, 16),
    (11, "send", UasIdForward, AMF, CS, HopType.CORE, 16),
    (12, "send", CsChallenge, CS, UAV, HopType.UE_CORE, 16),
    (12, "send", CsResponse, UAV, CS, HopType.UE_CORE, 32),
    (13, "send", CsConfirm, CS, AMF, HopType.CORE, 4),
    (13, "send", ServiceAccept, AMF, UAV, HopType.UE_CORE, 4),
]


class _ScriptedEndpoint:
    def __init__(self, actor_id: str, script: _Script):
        self.actor_id = actor_id
        self.script = script

    def receive(self, msg) -> None:
        self.script.advance()


class _Script:
    def __init__(self, net: SimNet, rng: random.Random):
        self.net = net
        self.rng = rng
        self.pos = 0
        for who in (UAV, AMF, UDM, CS):
            net.attach(_ScriptedEndpoint(who, self))

    def advance(self) -> None:
        if self.pos == len(BASELINE_STEPS):
            return
        _, kind, what, sender, receiver, hop, size = BASELINE_STEPS[self.pos]
        self.pos += 1
        if kind == "compute":
            self.net.compute(sender, what, self.advance)
        else:
            self.net.send(what(sender, receiver, self.rng.randbytes(size)), hop)


def run_nr_baseline_auth(net: SimNet | None = None, rng: random.Random | None = None) -> ScenarioTrace:
    net = net or SimNet()
    script = _Script(net, rng or random.Random(0))
    script.advance()
    trace = net.run_until_idle()
    trace.scenario = "nr_baseline"
    trace.outcome = Outcome.COMPLETED
    return trace
