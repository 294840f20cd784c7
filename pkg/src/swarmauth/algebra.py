"""Prime-field scalars and prime-order groups.

Two group instantiations share one interface:

* :class:`CurveGroup` is a short-Weierstrass curve ``y^2 = x^3 + ax + b`` over
  GF(p) with a generator of prime order ``q`` (P-256 by default).
* :class:`ToyGroup` is the additive group Z_q whose elements are their own
  discrete logarithms.  Every computation in it can be checked with plain
  modular arithmetic, which makes it the brute-force oracle for the curve.

Scalars are plain Python ints reduced modulo ``q``.

WARNING: none of this is constant time.  It exists to check protocol
correctness, not to protect real keys.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import gmpy2

__all__ = [
    "AlgebraError",
    "GroupMismatchError",
    "EncodingError",
    "scalar_add",
    "scalar_sub",
    "scalar_mul",
    "scalar_neg",
    "scalar_inv",
    "GroupDescriptor",
    "GroupElement",
    "ToyElement",
    "CurvePoint",
    "Group",
    "ToyGroup",
    "CurveGroup",
    "load_curve_params",
    "default_curve",
    "make_group",
    "group_from_descriptor",
]

IDENTITY_MARKER = b"\x00"
POINT_MARKER = b"\x04"
TOY_ENCODING_SIZE = 32


class AlgebraError(ValueError):
    pass


class GroupMismatchError(AlgebraError):
    pass


class EncodingError(AlgebraError):
    """Raised when bytes do not decode to a member of the group."""


# -- scalar field -------------------------------------------------------------


def scalar_add(a: int, b: int, q: int) -> int:
    return (a + b) % q


def scalar_sub(a: int, b: int, q: int) -> int:
    return (a - b) % q


def scalar_mul(a: int, b: int, q: int) -> int:
    return (a * b) % q


def scalar_neg(a: int, q: int) -> int:
    return -a % q


def scalar_inv(a: int, q: int) -> int:
    if a % q == 0:
        raise AlgebraError("zero has no multiplicative inverse")
    return pow(a, -1, q)


# -- descriptors --------------------------------------------------------------


@dataclass(frozen=True)
class GroupDescriptor:
    kind: str  # "curve" or "toy"
    order: int
    p: int | None = None
    a: int | None = None
    b: int | None = None
    gx: int | None = None
    gy: int | None = None
    name: str = ""

    def to_json(self) -> dict:
        out = {"kind": self.kind, "name": self.name, "q": str(self.order)}
        if self.kind == "curve":
            out.update(
                p=str(self.p), a=str(self.a), b=str(self.b), gx=str(self.gx), gy=str(self.gy)
            )
        return out

    @classmethod
    def from_json(cls, data: dict) -> GroupDescriptor:
        kind = data.get("kind", "curve")
        if kind == "toy":
            return cls(kind="toy", order=int(data["q"]), name=data.get("name", ""))
        if kind != "curve":
            raise AlgebraError(f"unknown group kind {kind!r}")
        return cls(
            kind="curve",
            order=int(data["q"]),
            p=int(data["p"]),
            a=int(data["a"]),
            b=int(data["b"]),
            gx=int(data["gx"]),
            gy=int(data["gy"]),
            name=data.get("name", ""),
        )


def load_curve_params(path: str | Path | None = None) -> GroupDescriptor:
    """Read ``{p, a, b, gx, gy, q}`` decimal strings from a JSON file.

    Without a path, the bundled P-256 parameters are used.
    """
    if path is None:
        text = resources.files("swarmauth.data").joinpath("p256.json").read_text()
    else:
        text = Path(path).read_text()
    data = json.loads(text)
    data.setdefault("kind", "curve")
    return GroupDescriptor.from_json(data)


# -- elements -----------------------------------------------------------------


class GroupElement:
    """Operator sugar shared by both element types."""

    group: Group

    def __add__(self, other: GroupElement) -> GroupElement:
        return self.group.add(self, other)

    def __neg__(self) -> GroupElement:
        return self.group.neg(self)

    def __sub__(self, other: GroupElement) -> GroupElement:
        return self.group.add(self, self.group.neg(other))

    def __rmul__(self, scalar: int) -> GroupElement:
        if not isinstance(scalar, int):
            return NotImplemented
        return self.group.mul(scalar, self)

    def to_bytes(self) -> bytes:
        return self.group.serialize(self)

    @property
    def is_identity(self) -> bool:
        return self == self.group.identity


@dataclass(frozen=True, eq=True, repr=False)
class ToyElement(GroupElement):
    group: ToyGroup
    value: int

    def __repr__(self) -> str:
        return f"elem({self.value})"


@dataclass(frozen=True, eq=True, repr=False)
class CurvePoint(GroupElement):
    group: CurveGroup
    x: int | None  # None marks the point at infinity
    y: int | None

    def __repr__(self) -> str:
        if self.x is None:
            return "CurvePoint(O)"
        return f"CurvePoint(x={self.x:#x}, y={self.y:#x})"


# -- groups -------------------------------------------------------------------


class Group:
    """Common surface of a prime-order cyclic group written additively."""

    descriptor: GroupDescriptor

    @property
    def order(self) -> int:
        return self.descriptor.order

    @property
    def kind(self) -> str:
        return self.descriptor.kind

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Group) and self.descriptor == other.descriptor

    def __hash__(self) -> int:
        return hash(self.descriptor)

    def _check(self, *elems: GroupElement) -> None:
        for e in elems:
            if e.group is not self and e.group != self:
                raise GroupMismatchError(f"{e!r} does not belong to {self!r}")

    def random_scalar(self, rng: random.Random, nonzero: bool = False) -> int:
        if nonzero:
            return rng.randrange(1, self.order)
        return rng.randrange(self.order)

    def random_element(self, rng: random.Random) -> GroupElement:
        return self.mul(self.random_scalar(rng), self.generator)

    # subclasses provide: generator, identity, add, neg, mul, serialize, deserialize


class ToyGroup(Group):
    """Z_q under addition; ``elem(s)`` is ``s`` times the generator ``elem(1)``."""

    def __init__(self, order: int = 31):
        if order < 2 or not gmpy2.is_prime(order):
            raise AlgebraError(f"toy group order must be prime, got {order}")
        if order >= 1 << (8 * TOY_ENCODING_SIZE):
            raise AlgebraError("toy group order does not fit the 32-byte encoding")
        self.descriptor = GroupDescriptor(kind="toy", order=order, name=f"Z_{order}")
        self.generator = ToyElement(self, 1)
        self.identity = ToyElement(self, 0)

    def __repr__(self) -> str:
        return f"ToyGroup(q={self.order})"

    def elem(self, value: int) -> ToyElement:
        return ToyElement(self, value % self.order)

    def discrete_log(self, e: ToyElement) -> int:
        self._check(e)
        return e.value

    def add(self, x: ToyElement, y: ToyElement) -> ToyElement:
        self._check(x, y)
        return ToyElement(self, (x.value + y.value) % self.order)

    def neg(self, x: ToyElement) -> ToyElement:
        self._check(x)
        return ToyElement(self, -x.value % self.order)

    def mul(self, s: int, x: ToyElement) -> ToyElement:
        self._check(x)
        return ToyElement(self, (s * x.value) % self.order)

    def serialize(self, x: ToyElement) -> bytes:
        self._check(x)
        return x.value.to_bytes(TOY_ENCODING_SIZE, "little")

    def deserialize(self, data: bytes) -> ToyElement:
        if len(data) != TOY_ENCODING_SIZE:
            raise EncodingError(f"toy element must be {TOY_ENCODING_SIZE} bytes, got {len(data)}")
        value = int.from_bytes(data, "little")
        if value >= self.order:
            raise EncodingError(f"toy element {value} out of range for q={self.order}")
        return ToyElement(self, value)


_INF = (1, 1, 0)  # Jacobian point at infinity


class CurveGroup(Group):
    """Short-Weierstrass curve of prime order.

    Arithmetic runs in Jacobian coordinates; multiples of the generator use a
    precomputed 4-bit window table, other points a 4-bit fixed window.
    """

    WINDOW = 4

    def __init__(self, descriptor: GroupDescriptor | None = None):
        descriptor = descriptor or load_curve_params()
        if descriptor.kind != "curve":
            raise AlgebraError("CurveGroup needs a curve descriptor")
        self.descriptor = descriptor
        # mpz roughly halves the cost of 256-bit modular products
        self.p = gmpy2.mpz(descriptor.p)
        self.a = gmpy2.mpz(descriptor.a) % self.p
        self.b = gmpy2.mpz(descriptor.b) % self.p
        self._a_is_minus3 = self.a == self.p - 3
        if (4 * self.a**3 + 27 * self.b**2) % self.p == 0:
            raise AlgebraError("singular curve")
        if not gmpy2.is_prime(descriptor.order):
            raise AlgebraError("curve group order must be prime")
        self.coord_size = (descriptor.p.bit_length() + 7) // 8
        self.identity = CurvePoint(self, None, None)
        g = (descriptor.gx, descriptor.gy)
        if not self._on_curve(*g):
            raise AlgebraError("generator is not on the curve")
        self.generator = CurvePoint(self, *g)
        self._base_table: list[list[tuple[int, int, int]]] | None = None
        if self._mul_var(descriptor.order, self._to_jac(self.generator))[2] % self.p != 0:
            raise AlgebraError("generator order differs from q")

    def __repr__(self) -> str:
        return f"CurveGroup({self.descriptor.name or 'custom'})"

    def _on_curve(self, x: int, y: int) -> bool:
        p = self.p
        if not (0 <= x < p and 0 <= y < p):
            return False
        return (y * y - (x * x * x + self.a * x + self.b)) % p == 0

    def contains(self, pt: CurvePoint) -> bool:
        return pt.x is None or self._on_curve(pt.x, pt.y)

    # Jacobian arithmetic: (X, Y, Z) represents (X/Z^2, Y/Z^3); Z == 0 is infinity.

    def _dbl(self, P: tuple[int, int, int]) -> tuple[int, int, int]:
        X, Y, Z = P
        p = self.p
        if Z == 0 or Y == 0:
            return _INF
        YY = Y * Y % p
        S = 4 * X * YY % p
        ZZ = Z * Z % p
        if self._a_is_minus3:
            M = 3 * (X - ZZ) * (X + ZZ) % p
        else:
            M = (3 * X * X + self.a * ZZ * ZZ) % p
        X3 = (M * M - 2 * S) % p
        Y3 = (M * (S - X3) - 8 * YY * YY) % p
        Z3 = 2 * Y * Z % p
        return (X3, Y3, Z3)

    def _add(self, P: tuple[int, int, int], Q: tuple[int, int, int]) -> tuple[int, int, int]:
        X1, Y1, Z1 = P
        X2, Y2, Z2 = Q
        if Z1 == 0:
            return Q
        if Z2 == 0:
            return P
        p = self.p
        Z1Z1 = Z1 * Z1 % p
        Z2Z2 = Z2 * Z2 % p
        U1 = X1 * Z2Z2 % p
        U2 = X2 * Z1Z1 % p
        S1 = Y1 * Z2 * Z2Z2 % p
        S2 = Y2 * Z1 * Z1Z1 % p
        if U1 == U2:
            if S1 != S2:
                return _INF
            return self._dbl(P)
        H = (U2 - U1) % p
        R = (S2 - S1) % p
        HH = H * H % p
        HHH = H * HH % p
        V = U1 * HH % p
        X3 = (R * R - HHH - 2 * V) % p
        Y3 = (R * (V - X3) - S1 * HHH) % p
        Z3 = Z1 * Z2 * H % p
        return (X3, Y3, Z3)

    def _to_jac(self, pt: CurvePoint) -> tuple[int, int, int]:
        if pt.x is None:
            return _INF
        return (gmpy2.mpz(pt.x), gmpy2.mpz(pt.y), gmpy2.mpz(1))

    def _from_jac(self, P: tuple[int, int, int]) -> CurvePoint:
        X, Y, Z = P
        if Z % self.p == 0:
            return self.identity
        p = self.p
        zi = pow(Z, -1, p)
        zi2 = zi * zi % p
        return CurvePoint(self, int(X * zi2 % p), int(Y * zi2 * zi % p))

    def _mul_var(self, k: int, P: tuple[int, int, int]) -> tuple[int, int, int]:
        if k == 0 or P[2] == 0:
            return _INF
        w = self.WINDOW
        table = [_INF, P]
        for _ in range(2, 1 << w):
            table.append(self._add(table[-1], P))
        acc = _INF
        nbits = k.bit_length()
        top = ((nbits + w - 1) // w) * w
        mask = (1 << w) - 1
        for shift in range(top - w, -1, -w):
            for _ in range(w):
                acc = self._dbl(acc)
            digit = (k >> shift) & mask
            if digit:
                acc = self._add(acc, table[digit])
        return acc

    def _mul_base(self, k: int) -> tuple[int, int, int]:
        if self._base_table is None:
            self._base_table = self._build_base_table()
        w = self.WINDOW
        mask = (1 << w) - 1
        acc = _INF
        j = 0
        while k:
            digit = k & mask
            if digit:
                acc = self._add(acc, self._base_table[j][digit])
            k >>= w
            j += 1
        return acc

    def _build_base_table(self) -> list[list[tuple[int, int, int]]]:
        w = self.WINDOW
        rows = []
        base = self._to_jac(self.generator)
        for _ in range((self.order.bit_length() + w - 1) // w):
            row = [_INF, base]
            for _ in range(2, 1 << w):
                row.append(self._add(row[-1], base))
            rows.append(row)
            for _ in range(w):
                base = self._dbl(base)
        return rows

    def add(self, x: CurvePoint, y: CurvePoint) -> CurvePoint:
        self._check(x, y)
        return self._from_jac(self._add(self._to_jac(x), self._to_jac(y)))

    def neg(self, x: CurvePoint) -> CurvePoint:
        self._check(x)
        if x.x is None:
            return x
        return CurvePoint(self, x.x, -x.y % self.p)

    def mul(self, s: int, x: CurvePoint) -> CurvePoint:
        self._check(x)
        s %= self.order
        if x == self.generator:
            return self._from_jac(self._mul_base(s))
        return self._from_jac(self._mul_var(s, self._to_jac(x)))

    def serialize(self, x: CurvePoint) -> bytes:
        self._check(x)
        if x.x is None:
            return IDENTITY_MARKER
        n = self.coord_size
        return POINT_MARKER + x.x.to_bytes(n, "big") + x.y.to_bytes(n, "big")

    def deserialize(self, data: bytes) -> CurvePoint:
        if data == IDENTITY_MARKER:
            return self.identity
        n = self.coord_size
        if len(data) != 1 + 2 * n or data[:1] != POINT_MARKER:
            raise EncodingError("malformed curve point encoding")
        x = int.from_bytes(data[1 : 1 + n], "big")
        y = int.from_bytes(data[1 + n :], "big")
        if not self._on_curve(x, y):
            raise EncodingError("point is not on the curve")
        return CurvePoint(self, x, y)


_DEFAULT_CURVE: CurveGroup | None = None


def default_curve() -> CurveGroup:
    """Shared P-256 instance, so the generator table is built once per process."""
    global _DEFAULT_CURVE
    if _DEFAULT_CURVE is None:
        _DEFAULT_CURVE = CurveGroup()
    return _DEFAULT_CURVE


def make_group(kind: str, toy_order: int = 31) -> Group:
    if kind == "curve":
        return default_curve()
    if kind == "toy":
        return ToyGroup(toy_order)
    raise AlgebraError(f"unknown group kind {kind!r}; expected 'curve' or 'toy'")


def group_from_descriptor(descriptor: GroupDescriptor) -> Group:
    if descriptor.kind == "toy":
        return ToyGroup(descriptor.order)
    if descriptor == default_curve().descriptor:
        return default_curve()
    return CurveGroup(descriptor)
