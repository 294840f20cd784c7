import random

import pytest
from cryptography.hazmat.primitives.asymmetric import ec
from hypothesis import given, settings
from hypothesis import strategies as st

from swarmauth.algebra import (
    AlgebraError,
    CurveGroup,
    EncodingError,
    GroupDescriptor,
    GroupMismatchError,
    ToyGroup,
    default_curve,
    group_from_descriptor,
    load_curve_params,
    make_group,
    scalar_add,
    scalar_inv,
    scalar_mul,
    scalar_neg,
    scalar_sub,
)

Q31 = 31
small = st.integers(min_value=0, max_value=Q31 - 1)
nonzero = st.integers(min_value=1, max_value=Q31 - 1)
curve_scalars = st.integers(min_value=0, max_value=default_curve().order - 1)


def test_gf31_worked_values():
    assert scalar_add(20, 13, Q31) == 2
    assert scalar_sub(2, 13, Q31) == 20
    assert scalar_mul(7, 9, Q31) == 1
    assert scalar_neg(5, Q31) == 26


def test_inverse_of_two_by_search():
    brute = next(b for b in range(1, Q31) if 2 * b % Q31 == 1)
    assert scalar_inv(2, Q31) == brute == 16


def test_inverse_of_zero_fails():
    with pytest.raises(AlgebraError):
        scalar_inv(0, Q31)
    with pytest.raises(AlgebraError):
        scalar_inv(62, Q31)


@given(nonzero)
def test_inverse_matches_exhaustive_search(a):
    assert scalar_inv(a, Q31) == next(b for b in range(1, Q31) if a * b % Q31 == 1)


@given(small, small, small)
def test_field_axioms(a, b, c):
    assert scalar_add(a, b, Q31) == scalar_add(b, a, Q31)
    assert scalar_mul(a, scalar_add(b, c, Q31), Q31) == scalar_add(
        scalar_mul(a, b, Q31), scalar_mul(a, c, Q31), Q31
    )
    assert scalar_add(a, scalar_neg(a, Q31), Q31) == 0
    assert scalar_sub(scalar_add(a, b, Q31), b, Q31) == a


def test_toy_group_is_its_own_log(toy):
    e = toy.elem(20) + toy.elem(13)
    assert toy.discrete_log(e) == 2
    assert 3 * toy.elem(11) == toy.elem(2)
    assert (-toy.elem(5)).value == 26
    assert toy.identity.is_identity


def test_toy_group_rejects_composite_order():
    with pytest.raises(AlgebraError):
        ToyGroup(32)


def test_curve_parameters_are_p256():
    d = load_curve_params()
    assert d.p == 2**256 - 2**224 + 2**192 + 2**96 - 1
    assert d.order == 0xFFFFFFFF00000000FFFFFFFFFFFFFFFFBCE6FAADA7179E84F3B9CAC2FC632551
    assert d.gx == 0x6B17D1F2E12C4247F8BCE6E563A440F277037D812DEB33A0F4A13945D898C296


def test_descriptor_json_round_trip():
    d = load_curve_params()
    assert GroupDescriptor.from_json(d.to_json()) == d
    t = ToyGroup(31).descriptor
    assert group_from_descriptor(GroupDescriptor.from_json(t.to_json())) == ToyGroup(31)


def test_curve_rejects_bad_generator():
    d = load_curve_params()
    bogus = GroupDescriptor(**{**d.__dict__, "gy": d.gy + 1})
    with pytest.raises(AlgebraError):
        CurveGroup(bogus)


def test_generator_has_prime_order(curve):
    assert curve.mul(curve.order, curve.generator).is_identity
    assert not curve.mul(curve.order - 1, curve.generator).is_identity
    assert curve.mul(curve.order - 1, curve.generator) == -curve.generator


@settings(max_examples=20, deadline=None)
@given(curve_scalars)
def test_scalar_mult_matches_reference_library(k):
    k = k or 1
    ours = default_curve().mul(k, default_curve().generator)
    ref = ec.derive_private_key(k, ec.SECP256R1()).public_key().public_numbers()
    assert (ours.x, ours.y) == (ref.x, ref.y)


@settings(max_examples=25, deadline=None)
@given(curve_scalars, curve_scalars)
def test_scalar_mult_is_a_homomorphism(s, t):
    g = default_curve()
    P = g.generator
    assert g.mul(s, P) + g.mul(t, P) == g.mul(s + t, P)
    assert g.mul(s, g.mul(t, P)) == g.mul(s * t, P)


@settings(max_examples=25, deadline=None)
@given(curve_scalars, curve_scalars)
def test_variable_and_fixed_base_paths_agree(s, t):
    g = default_curve()
    R = g.mul(t or 1, g.generator)
    # R is not the generator, so this goes through the windowed path
    assert g.mul(s, R) == g.mul(s * (t or 1), g.generator)


def test_point_addition_edge_cases(curve):
    P = curve.generator
    O = curve.identity
    assert P + O == P
    assert O + P == P
    assert P + (-P) == O
    assert P + P == 2 * P
    assert (-O).is_identity


@settings(max_examples=20, deadline=None)
@given(curve_scalars)
def test_curve_serialization_round_trip(k):
    g = default_curve()
    P = g.mul(k, g.generator)
    data = g.serialize(P)
    assert g.deserialize(data) == P
    assert len(data) == (1 if P.is_identity else 65)


@given(small)
def test_toy_serialization_round_trip(v):
    g = ToyGroup(31)
    assert g.deserialize(g.serialize(g.elem(v))) == g.elem(v)


def test_deserialize_rejects_garbage(curve, toy):
    good = curve.serialize(curve.generator)
    with pytest.raises(EncodingError):
        curve.deserialize(good[:-1])
    with pytest.raises(EncodingError):
        curve.deserialize(good[:-1] + bytes([good[-1] ^ 1]))
    with pytest.raises(EncodingError):
        curve.deserialize(b"\x02" + good[1:])
    with pytest.raises(EncodingError):
        toy.deserialize((31).to_bytes(32, "little"))
    with pytest.raises(EncodingError):
        toy.deserialize(b"\x01")


def test_mixing_groups_fails(curve, toy):
    with pytest.raises(GroupMismatchError):
        curve.add(curve.generator, toy.elem(1))
    with pytest.raises(GroupMismatchError):
        toy.elem(1) + ToyGroup(37).elem(1)


def test_make_group():
    assert make_group("toy", 37).order == 37
    assert make_group("curve") is default_curve()
    with pytest.raises(ValueError):
        make_group("rsa")


def test_random_scalars_are_seeded(toy):
    a = [toy.random_scalar(random.Random(5), nonzero=True) for _ in range(3)]
    b = [toy.random_scalar(random.Random(5), nonzero=True) for _ in range(3)]
    assert a == b and 0 not in a
