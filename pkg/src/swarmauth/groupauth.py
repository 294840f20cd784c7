"""Threshold group authentication over a prime-order group.

A trusted dealer (the drone control station) picks a polynomial of degree
``m - 1`` whose constant term is the group key, and gives member ``i`` the
private share ``p(x_i)`` together with the public pair ``(x_i, p(x_i)*P)``.
Any ``m`` members authenticate as a group when their Lagrange-weighted
contributions sum to the published point ``Q = a_0*P``.

Note that the sum check only needs public pairs.  Anyone replaying captured
pairs passes it; what they cannot do is derive the pairwise key that wraps the
group key, which is why key delivery is the real gate.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import secrets
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Protocol, Sequence

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import AESGCM

from .algebra import (
    AlgebraError,
    Group,
    GroupDescriptor,
    GroupElement,
    group_from_descriptor,
    scalar_inv,
)

KDF_PREFIX = b"swarmauth/pairwise-key/v1"
WRAP_AAD = b"swarmauth/group-key/v1"
KEY_SIZE = 32
NONCE_SIZE = 12
SCALAR_SIZE = 32


class GroupAuthError(ValueError):
    """Malformed input to a scheme operation (as opposed to a failed check)."""


class UnwrapError(Exception):
    """The wrapped group key did not authenticate under the supplied key."""


# -- data ---------------------------------------------------------------------


@dataclass(frozen=True)
class Polynomial:
    coefficients: tuple[int, ...]
    order: int

    @property
    def threshold(self) -> int:
        return len(self.coefficients)

    @property
    def group_key(self) -> int:
        return self.coefficients[0]

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coefficients):
            acc = (acc * x + c) % self.order
        return acc


@dataclass(frozen=True)
class PublicPair:
    index: int
    public_point: GroupElement

    def to_bytes(self) -> bytes:
        return self.index.to_bytes(SCALAR_SIZE, "big") + self.public_point.to_bytes()

    @classmethod
    def from_bytes(cls, data: bytes, group: Group) -> PublicPair:
        if len(data) <= SCALAR_SIZE:
            raise GroupAuthError("public pair encoding too short")
        index = int.from_bytes(data[:SCALAR_SIZE], "big")
        if not 0 < index < group.order:
            raise GroupAuthError(f"public index {index} out of range")
        return cls(index, group.deserialize(data[SCALAR_SIZE:]))


@dataclass(frozen=True)
class Credential:
    index: int
    private_share: int
    public_point: GroupElement = field(repr=False)

    @property
    def public(self) -> PublicPair:
        return PublicPair(self.index, self.public_point)


@dataclass(frozen=True)
class GroupParams:
    group: Group
    threshold: int
    verification_point: GroupElement

    @property
    def generator(self) -> GroupElement:
        return self.group.generator

    @property
    def order(self) -> int:
        return self.group.order


@dataclass(frozen=True)
class WrappedGroupKey:
    nonce: bytes
    ciphertext: bytes
    tag: bytes

    def to_bytes(self) -> bytes:
        return self.nonce + self.ciphertext + self.tag

    @classmethod
    def from_bytes(cls, data: bytes) -> WrappedGroupKey:
        if len(data) < NONCE_SIZE + 16:
            raise GroupAuthError("wrapped key too short")
        return cls(data[:NONCE_SIZE], data[NONCE_SIZE:-16], data[-16:])


# -- dealer -------------------------------------------------------------------


def gen_polynomial(
    m: int, order: int, rng: random.Random, group_key: int | None = None
) -> Polynomial:
    """Random polynomial with ``m`` coefficients; ``group_key`` fixes ``a_0``."""
    if m < 1:
        raise GroupAuthError("threshold must be at least 1")
    a0 = rng.randrange(order) if group_key is None else group_key % order
    rest = [rng.randrange(order) for _ in range(m - 1)]
    return Polynomial((a0, *rest), order)


def make_params(poly: Polynomial, group: Group) -> GroupParams:
    if poly.order != group.order:
        raise GroupAuthError("polynomial field does not match the group order")
    return GroupParams(group, poly.threshold, group.mul(poly.group_key, group.generator))


def issue_credential(poly: Polynomial, x: int, params: GroupParams) -> Credential:
    x %= params.order
    if x == 0:
        raise GroupAuthError("index 0 would reveal the group key")
    share = poly(x)
    return Credential(x, share, params.group.mul(share, params.generator))


def issue_batch(poly: Polynomial, indices: Iterable[int], params: GroupParams) -> list[Credential]:
    indices = [x % params.order for x in indices]
    if len(set(indices)) != len(indices):
        raise GroupAuthError("duplicate index in issuance batch")
    return [issue_credential(poly, x, params) for x in indices]


class ControlStation:
    """Trusted dealer: owns the polynomial and hands out consecutive indices from 1."""

    def __init__(
        self,
        group: Group,
        threshold: int,
        rng: random.Random,
        group_key: int | None = None,
    ):
        self.group = group
        self.poly = gen_polynomial(threshold, group.order, rng, group_key)
        self.params = make_params(self.poly, group)
        self._next_index = 1
        self._skipped = 0

    @property
    def group_key(self) -> int:
        return self.poly.group_key

    def issue(self, count: int = 1) -> list[Credential]:
        """Next ``count`` credentials.

        An index whose share is zero is skipped: its public point would be
        the identity and every pairwise key with it degenerate.  Only small
        toy groups ever hit this.
        """
        indices = []
        while len(indices) < count:
            x = self._next_index
            if x >= self.group.order:
                raise GroupAuthError(f"index space of Z_{self.group.order} exhausted")
            self._next_index += 1
            if self.poly(x) != 0:
                indices.append(x)
                continue
            # a nonzero polynomial has at most m - 1 roots
            self._skipped += 1
            if self._skipped >= self.poly.threshold:
                raise GroupAuthError("sharing polynomial is identically zero")
        return issue_batch(self.poly, indices, self.params)

    def issue_one(self) -> Credential:
        return self.issue(1)[0]


# -- authentication -----------------------------------------------------------


def _check_indices(indices: Sequence[int], q: int) -> list[int]:
    idx = [x % q for x in indices]
    if not idx:
        raise GroupAuthError("empty index set")
    if any(x == 0 for x in idx):
        raise GroupAuthError("index 0 is not allowed")
    if len(set(idx)) != len(idx):
        raise GroupAuthError("duplicate indices")
    return idx


def lagrange_coeff_at_zero(indices: Sequence[int], i: int, q: int) -> int:
    """Weight of the member at position ``i`` when interpolating at zero."""
    idx = _check_indices(indices, q)
    xi = idx[i]
    num, den = 1, 1
    for r, xr in enumerate(idx):
        if r == i:
            continue
        num = num * -xr % q
        den = den * (xi - xr) % q
    return num * scalar_inv(den, q) % q


def _position(index: int, indices: Sequence[int], params: GroupParams) -> int:
    if len(indices) != params.threshold:
        raise GroupAuthError(
            f"need exactly {params.threshold} indices, got {len(indices)}"
        )
    idx = [x % params.order for x in indices]
    try:
        return idx.index(index % params.order)
    except ValueError:
        raise GroupAuthError(f"index {index} is not in the participant set") from None


def compute_contribution(
    cred: Credential, indices: Sequence[int], params: GroupParams
) -> GroupElement:
    """Contribution of a member who holds its private share."""
    pos = _position(cred.index, indices, params)
    weight = lagrange_coeff_at_zero(indices, pos, params.order)
    return params.group.mul(weight * cred.private_share, params.generator)


def contribution_from_public(
    pair: PublicPair, indices: Sequence[int], params: GroupParams
) -> GroupElement:
    """Same value as :func:`compute_contribution`, from the public pair alone."""
    pos = _position(pair.index, indices, params)
    weight = lagrange_coeff_at_zero(indices, pos, params.order)
    return params.group.mul(weight, pair.public_point)


def verify_group(contributions: Sequence[GroupElement], params: GroupParams) -> bool:
    if len(contributions) != params.threshold:
        raise GroupAuthError(
            f"need exactly {params.threshold} contributions, got {len(contributions)}"
        )
    total = params.group.identity
    for c in contributions:
        total = total + c
    return total == params.verification_point


def recover_group_key(shares: Sequence[tuple[int, int]], q: int, threshold: int | None = None) -> int:
    """Interpolate ``(x_i, p(x_i))`` pairs at zero."""
    if threshold is not None and len(shares) < threshold:
        raise GroupAuthError(f"need {threshold} shares, got {len(shares)}")
    xs = [x for x, _ in shares]
    _check_indices(xs, q)
    return sum(
        y * lagrange_coeff_at_zero(xs, i, q) for i, (_, y) in enumerate(shares)
    ) % q


# -- pairwise keys and wrapping -------------------------------------------------


def shared_point(my: Credential, their: PublicPair, params: GroupParams) -> GroupElement:
    if their.public_point.is_identity:
        raise GroupAuthError("peer public point is the identity; the shared key would be degenerate")
    point = params.group.mul(my.private_share, their.public_point)
    if point.is_identity:
        raise GroupAuthError("own share is zero; the shared key would be degenerate")
    return point


def kdf(point: GroupElement) -> bytes:
    return hashlib.sha256(KDF_PREFIX + point.to_bytes()).digest()


def derive_pairwise_key(my: Credential, their: PublicPair, params: GroupParams) -> bytes:
    return kdf(shared_point(my, their, params))


class KeyWrapper(Protocol):
    def seal(self, key: bytes, nonce: bytes, plaintext: bytes) -> bytes: ...

    def open(self, key: bytes, nonce: bytes, sealed: bytes) -> bytes: ...


class AesGcmWrapper:
    def seal(self, key: bytes, nonce: bytes, plaintext: bytes) -> bytes:
        return AESGCM(key).encrypt(nonce, plaintext, WRAP_AAD)

    def open(self, key: bytes, nonce: bytes, sealed: bytes) -> bytes:
        try:
            return AESGCM(key).decrypt(nonce, sealed, WRAP_AAD)
        except InvalidTag:
            raise UnwrapError("group key failed authentication") from None


DEFAULT_WRAPPER: KeyWrapper = AesGcmWrapper()


def wrap_group_key(
    key: bytes,
    group_key: int,
    rng: random.Random | None = None,
    wrapper: KeyWrapper = DEFAULT_WRAPPER,
) -> WrappedGroupKey:
    """Seal the group key; a seeded ``rng`` makes the nonce reproducible."""
    if len(key) != KEY_SIZE:
        raise GroupAuthError(f"wrapping key must be {KEY_SIZE} bytes")
    nonce = rng.randbytes(NONCE_SIZE) if rng is not None else secrets.token_bytes(NONCE_SIZE)
    sealed = wrapper.seal(key, nonce, group_key.to_bytes(SCALAR_SIZE, "big"))
    return WrappedGroupKey(nonce, sealed[:-16], sealed[-16:])


def unwrap_group_key(
    key: bytes, wrapped: WrappedGroupKey, wrapper: KeyWrapper = DEFAULT_WRAPPER
) -> int:
    if len(key) != KEY_SIZE:
        raise GroupAuthError(f"wrapping key must be {KEY_SIZE} bytes")
    plain = wrapper.open(key, wrapped.nonce, wrapped.ciphertext + wrapped.tag)
    return int.from_bytes(plain, "big")


# -- files --------------------------------------------------------------------


def params_to_json(params: GroupParams) -> dict:
    return {
        "descriptor": params.group.descriptor.to_json(),
        "threshold": params.threshold,
        "generator_hex": params.generator.to_bytes().hex(),
        "verification_point_hex": params.verification_point.to_bytes().hex(),
    }


def params_from_json(data: dict) -> GroupParams:
    group = group_from_descriptor(GroupDescriptor.from_json(data["descriptor"]))
    if bytes.fromhex(data["generator_hex"]) != group.generator.to_bytes():
        raise GroupAuthError("generator does not match the descriptor")
    try:
        q_point = group.deserialize(bytes.fromhex(data["verification_point_hex"]))
    except AlgebraError as exc:
        raise GroupAuthError(f"bad verification point: {exc}") from exc
    return GroupParams(group, int(data["threshold"]), q_point)


def credentials_to_json(creds: Iterable[Credential]) -> list[dict]:
    return [
        {
            "x": str(c.index),
            "private_share": str(c.private_share),
            "public_point_hex": c.public_point.to_bytes().hex(),
        }
        for c in creds
    ]


def credentials_from_json(data: list[dict], params: GroupParams) -> list[Credential]:
    out = []
    for row in data:
        cred = Credential(
            int(row["x"]),
            int(row["private_share"]),
            params.group.deserialize(bytes.fromhex(row["public_point_hex"])),
        )
        if params.group.mul(cred.private_share, params.generator) != cred.public_point:
            raise GroupAuthError(f"credential {cred.index}: public point does not match share")
        out.append(cred)
    return out


def save_keyset(out_dir: str | os.PathLike, params: GroupParams, creds: Iterable[Credential]) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "params.json").write_text(json.dumps(params_to_json(params), indent=2) + "\n")
    (out / "credentials.json").write_text(json.dumps(credentials_to_json(creds), indent=2) + "\n")


def load_keyset(in_dir: str | os.PathLike) -> tuple[GroupParams, list[Credential]]:
    src = Path(in_dir)
    params = params_from_json(json.loads((src / "params.json").read_text()))
    creds = credentials_from_json(json.loads((src / "credentials.json").read_text()), params)
    return params, creds
