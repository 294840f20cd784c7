"""Wire messages for the swarm scenarios and the 5G NR baseline.

Frame layout::

    tag:u8 | len:u8 sender | len:u8 receiver | len:u32 payload

Sizes only feed the trace; nothing goes over a real socket.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from typing import ClassVar

from ..algebra import Group
from ..groupauth import PublicPair, WrappedGroupKey


class MessageError(ValueError):
    pass


_REGISTRY: dict[int, type[Message]] = {}


def _register(cls):
    if cls.TAG in _REGISTRY:
        raise RuntimeError(f"duplicate message tag {cls.TAG}")
    _REGISTRY[cls.TAG] = cls
    return cls


@dataclass(frozen=True)
class Message:
    TAG: ClassVar[int] = 0

    sender: str
    receiver: str

    @property
    def msg_type(self) -> str:
        return type(self).__name__

    def payload(self) -> bytes:
        return b""

    @classmethod
    def parse(cls, sender: str, receiver: str, payload: bytes, group: Group) -> Message:
        if payload:
            raise MessageError(f"{cls.__name__} carries no payload")
        return cls(sender, receiver)

    def encode(self) -> bytes:
        s, r, body = self.sender.encode(), self.receiver.encode(), self.payload()
        if len(s) > 255 or len(r) > 255:
            raise MessageError("actor id too long")
        return (
            struct.pack(">BB", self.TAG, len(s)) + s
            + struct.pack(">B", len(r)) + r
            + struct.pack(">I", len(body)) + body
        )

    @property
    def size_bytes(self) -> int:
        return len(self.encode())


def decode(data: bytes, group: Group) -> Message:
    try:
        tag, slen = struct.unpack_from(">BB", data, 0)
        pos = 2
        sender = data[pos : pos + slen].decode()
        pos += slen
        (rlen,) = struct.unpack_from(">B", data, pos)
        pos += 1
        receiver = data[pos : pos + rlen].decode()
        pos += rlen
        (plen,) = struct.unpack_from(">I", data, pos)
        pos += 4
    except (struct.error, UnicodeDecodeError) as exc:
        raise MessageError(f"bad frame header: {exc}") from exc
    body = data[pos:]
    if len(body) != plen:
        raise MessageError("payload length mismatch")
    cls = _REGISTRY.get(tag)
    if cls is None:
        raise MessageError(f"unknown message tag {tag}")
    return cls.parse(sender, receiver, body, group)


def _pair_message(tag: int, name: str):
    """Message type whose payload is one public pair."""

    @dataclass(frozen=True)
    class _PairMsg(Message):
        TAG: ClassVar[int] = tag
        pair: PublicPair = field(default=None)

        def payload(self) -> bytes:
            return self.pair.to_bytes()

        @classmethod
        def parse(cls, sender, receiver, payload, group):
            return cls(sender, receiver, PublicPair.from_bytes(payload, group))

    _PairMsg.__name__ = _PairMsg.__qualname__ = name
    return _register(_PairMsg)


JoinRequest = _pair_message(1, "JoinRequest")
PublicPairAnnounce = _pair_message(2, "PublicPairAnnounce")
KeyAgreementInit = _pair_message(4, "KeyAgreementInit")
BsPublicPair = _pair_message(7, "BsPublicPair")


@_register
@dataclass(frozen=True)
class AuthVerdict(Message):
    """Outcome of a sum check.  A t-BS also attaches its own public pair so
    the network drones can run key agreement with it."""

    TAG: ClassVar[int] = 3
    accepted: bool = False
    verifier_pair: PublicPair | None = None

    def payload(self) -> bytes:
        pair = self.verifier_pair.to_bytes() if self.verifier_pair else b""
        return bytes([int(self.accepted)]) + pair

    @classmethod
    def parse(cls, sender, receiver, payload, group):
        if not payload or payload[0] not in (0, 1):
            raise MessageError("bad verdict byte")
        pair = PublicPair.from_bytes(payload[1:], group) if len(payload) > 1 else None
        return cls(sender, receiver, bool(payload[0]), pair)


@_register
@dataclass(frozen=True)
class WrappedKeyDelivery(Message):
    TAG: ClassVar[int] = 5
    wrapped: WrappedGroupKey = field(default=None)

    def payload(self) -> bytes:
        return self.wrapped.to_bytes()

    @classmethod
    def parse(cls, sender, receiver, payload, group):
        return cls(sender, receiver, WrappedGroupKey.from_bytes(payload))


@_register
@dataclass(frozen=True)
class HandoverPublicPairs(Message):
    TAG: ClassVar[int] = 6
    pairs: tuple[PublicPair, ...] = ()

    def payload(self) -> bytes:
        out = struct.pack(">H", len(self.pairs))
        for p in self.pairs:
            enc = p.to_bytes()
            out += struct.pack(">H", len(enc)) + enc
        return out

    @classmethod
    def parse(cls, sender, receiver, payload, group):
        try:
            (n,) = struct.unpack_from(">H", payload, 0)
            pos, pairs = 2, []
            for _ in range(n):
                (ln,) = struct.unpack_from(">H", payload, pos)
                pos += 2
                pairs.append(PublicPair.from_bytes(payload[pos : pos + ln], group))
                pos += ln
        except struct.error as exc:
            raise MessageError(f"truncated pair list: {exc}") from exc
        if pos != len(payload):
            raise MessageError("trailing bytes after pair list")
        return cls(sender, receiver, tuple(pairs))


@_register
@dataclass(frozen=True)
class Reject(Message):
    TAG: ClassVar[int] = 8
    reason: str = ""

    def payload(self) -> bytes:
        return self.reason.encode()

    @classmethod
    def parse(cls, sender, receiver, payload, group):
        return cls(sender, receiver, payload.decode())


# -- 5G NR baseline: opaque payloads, counted but never interpreted ------------


@dataclass(frozen=True)
class OpaqueMessage(Message):
    blob: bytes = b""
    step: ClassVar[int] = 0

    def payload(self) -> bytes:
        return self.blob

    @classmethod
    def parse(cls, sender, receiver, payload, group):
        return cls(sender, receiver, payload)


def _opaque(tag: int, name: str, step: int):
    cls = dataclass(frozen=True)(type(name, (OpaqueMessage,), {"TAG": tag, "step": step, "__annotations__": {}}))
    return _register(cls)


SuciRegistration = _opaque(16, "SuciRegistration", 2)
SuciForward = _opaque(17, "SuciForward", 3)
AuthVector = _opaque(18, "AuthVector", 6)
RandChallenge = _opaque(19, "RandChallenge", 7)
ChallengeResponse = _opaque(20, "ChallengeResponse", 8)
UasIdRequest = _opaque(21, "UasIdRequest", 9)
UasIdResponse = _opaque(22, "UasIdResponse", 10)
UasIdForward = _opaque(23, "UasIdForward", 11)
CsChallenge = _opaque(24, "CsChallenge", 12)
CsResponse = _opaque(25, "CsResponse", 12)
CsConfirm = _opaque(26, "CsConfirm", 13)
ServiceAccept = _opaque(27, "ServiceAccept", 13)


def public_pairs_in(msg: Message) -> list[PublicPair]:
    """Every public pair a passive listener learns from ``msg``."""
    pair = getattr(msg, "pair", None)
    out = [pair] if pair is not None else []
    out.extend(getattr(msg, "pairs", ()))
    if isinstance(msg, AuthVerdict) and msg.verifier_pair is not None:
        out.append(msg.verifier_pair)
    return out
