import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from swarmauth.algebra import ToyGroup, default_curve
from swarmauth.groupauth import (
    ControlStation,
    Credential,
    GroupAuthError,
    Polynomial,
    PublicPair,
    UnwrapError,
    WrappedGroupKey,
    compute_contribution,
    contribution_from_public,
    derive_pairwise_key,
    gen_polynomial,
    issue_batch,
    issue_credential,
    lagrange_coeff_at_zero,
    load_keyset,
    make_params,
    recover_group_key,
    save_keyset,
    shared_point,
    unwrap_group_key,
    verify_group,
    wrap_group_key,
)
from swarmauth.protocol.adversary import brute_force_shares

TOY = ToyGroup(31)


@pytest.fixture
def line():
    """p(x) = 7 + 3x over Z_31 with members 1 and 2."""
    poly = Polynomial((7, 3), 31)
    params = make_params(poly, TOY)
    return poly, params, issue_batch(poly, [1, 2], params)


def test_shares_of_a_line(line):
    poly, _, (c1, c2) = line
    assert (c1.private_share, c2.private_share) == (10, 13)
    assert c1.public_point == TOY.elem(10)


def test_quadratic_evaluation():
    assert Polynomial((5, 2, 4), 31)(3) == 16


def test_lagrange_weights():
    assert lagrange_coeff_at_zero([1, 2], 0, 31) == 2
    assert lagrange_coeff_at_zero([1, 2], 1, 31) == 30
    assert lagrange_coeff_at_zero([1, 2, 3], 2, 31) == 1


def test_toy_contributions_sum_to_verification_point(line):
    _, params, creds = line
    contribs = [compute_contribution(c, [1, 2], params) for c in creds]
    assert contribs == [TOY.elem(20), TOY.elem(18)]
    assert params.verification_point == TOY.elem(7)
    assert verify_group(contribs, params)


def test_public_and_private_contributions_agree(line):
    _, params, creds = line
    for c in creds:
        assert contribution_from_public(c.public, [1, 2], params) == compute_contribution(c, [1, 2], params)


def test_gf31_recovery_examples():
    assert recover_group_key([(1, 10), (2, 13)], 31) == 7
    assert recover_group_key([(1, 11), (2, 25), (3, 16)], 31) == 5
    assert recover_group_key([(3, 16), (1, 11), (2, 25)], 31) == 5


def test_recovery_needs_enough_shares():
    with pytest.raises(GroupAuthError):
        recover_group_key([(1, 10)], 31, threshold=2)
    with pytest.raises(GroupAuthError):
        recover_group_key([(1, 10), (1, 10)], 31)
    with pytest.raises(GroupAuthError):
        recover_group_key([(0, 7), (1, 10)], 31)


def test_pairwise_point(line):
    _, params, (c1, c2) = line
    assert shared_point(c1, c2.public, params) == TOY.elem(6)
    assert derive_pairwise_key(c1, c2.public, params) == derive_pairwise_key(c2, c1.public, params)


def test_contribution_requires_exact_threshold(line):
    _, params, (c1, _) = line
    with pytest.raises(GroupAuthError):
        compute_contribution(c1, [1], params)
    with pytest.raises(GroupAuthError):
        compute_contribution(c1, [1, 2, 3], params)
    with pytest.raises(GroupAuthError):
        compute_contribution(c1, [2, 3], params)
    with pytest.raises(GroupAuthError):
        verify_group([TOY.elem(1)], params)


def test_sum_check_accepts_exactly_the_true_point(line):
    """Every forged point for member 2 except the real one fails."""
    _, params, (c1, c2) = line
    passing = [
        v for v in range(31)
        if verify_group(
            [compute_contribution(c1, [1, 2], params),
             contribution_from_public(PublicPair(2, TOY.elem(v)), [1, 2], params)],
            params,
        )
    ]
    assert passing == [13]


def test_issuance_rules(rng):
    poly = gen_polynomial(3, 31, rng)
    params = make_params(poly, TOY)
    with pytest.raises(GroupAuthError):
        issue_credential(poly, 0, params)
    with pytest.raises(GroupAuthError):
        issue_credential(poly, 31, params)
    with pytest.raises(GroupAuthError):
        issue_batch(poly, [1, 32], params)
    with pytest.raises(GroupAuthError):
        gen_polynomial(0, 31, rng)
    with pytest.raises(GroupAuthError):
        make_params(Polynomial((1, 2), 37), TOY)


def test_station_skips_zero_shares():
    # a0 = 0, a1 = 1 would give member 31 a zero share, but 31 is out of range;
    # p(x) = 1 + 30x vanishes at x = 1
    station = ControlStation(TOY, 2, random.Random(0), group_key=1)
    station.poly = Polynomial((1, 30), 31)
    station.params = make_params(station.poly, TOY)
    creds = station.issue(3)
    assert [c.index for c in creds] == [2, 3, 4]
    assert all(c.private_share for c in creds)


def test_station_refuses_zero_polynomial():
    station = ControlStation(TOY, 3, random.Random(0), group_key=0)
    station.poly = Polynomial((0, 0, 0), 31)
    with pytest.raises(GroupAuthError):
        station.issue(1)


def test_station_runs_out_of_indices():
    station = ControlStation(TOY, 2, random.Random(0))
    station.issue(29)
    with pytest.raises(GroupAuthError):
        station.issue(2)


def test_honest_sets_always_verify():
    rng = random.Random(7)
    ok = 0
    for _ in range(1000):
        # m = 1 with a zero secret would leave no usable index at all
        m = rng.randint(2, 6)
        station = ControlStation(TOY, m, rng)
        creds = station.issue(m + 3)
        chosen = rng.sample(creds, m)
        idx = [c.index for c in chosen]
        ok += verify_group([compute_contribution(c, idx, station.params) for c in chosen], station.params)
    assert ok == 1000


def test_random_polynomials_interpolate():
    rng = random.Random(11)
    q = default_curve().order
    for _ in range(1000):
        m = rng.randint(1, 10)
        poly = gen_polynomial(m, q, rng)
        xs = rng.sample(range(1, 10_000), m)
        assert recover_group_key([(x, poly(x)) for x in xs], q) == poly.group_key


def test_two_shares_leave_every_secret_possible():
    rng = random.Random(3)
    poly = gen_polynomial(3, 31, rng)
    known = [(1, poly(1)), (2, poly(2))]
    candidates = {
        a0
        for a0, a1, a2 in itertools.product(range(31), repeat=3)
        if all((a0 + a1 * x + a2 * x * x) % 31 == y for x, y in known)
    }
    assert candidates == set(range(31))


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.integers(0, 30), min_size=1, max_size=5),
    st.lists(st.integers(1, 30), min_size=5, max_size=5, unique=True),
)
def test_recovery_inverts_sharing(coeffs, xs):
    poly = Polynomial(tuple(coeffs), 31)
    m = poly.threshold
    assert recover_group_key([(x, poly(x)) for x in xs[:m]], 31) == coeffs[0]
    # one more share than needed changes nothing
    if m < 5:
        assert recover_group_key([(x, poly(x)) for x in xs[: m + 1]], 31) == coeffs[0]


@settings(max_examples=10, deadline=None)
@given(st.integers(2, 5), st.randoms(use_true_random=False))
def test_curve_contributions_sum_to_q(m, r):
    station = ControlStation(default_curve(), m, r)
    if not any(station.poly.coefficients):
        return
    creds = station.issue(m)
    idx = [c.index for c in creds]
    contribs = [contribution_from_public(c.public, idx, station.params) for c in creds]
    assert verify_group(contribs, station.params)
    tampered = contribs[:-1] + [contribs[-1] + station.params.generator]
    assert not verify_group(tampered, station.params)


def test_wrap_round_trip_and_wrong_key(curve):
    station = ControlStation(curve, 2, random.Random(2))
    a, b, c = station.issue(3)
    k_ab = derive_pairwise_key(a, b.public, station.params)
    wrapped = wrap_group_key(k_ab, station.group_key, random.Random(1))
    assert unwrap_group_key(derive_pairwise_key(b, a.public, station.params), wrapped) == station.group_key
    with pytest.raises(UnwrapError):
        unwrap_group_key(derive_pairwise_key(c, a.public, station.params), wrapped)
    again = WrappedGroupKey.from_bytes(wrapped.to_bytes())
    assert again == wrapped
    flipped = WrappedGroupKey(wrapped.nonce, bytes([wrapped.ciphertext[0] ^ 1]) + wrapped.ciphertext[1:], wrapped.tag)
    with pytest.raises(UnwrapError):
        unwrap_group_key(k_ab, flipped)


def test_seeded_wrapping_is_reproducible(line):
    _, params, (c1, c2) = line
    key = derive_pairwise_key(c1, c2.public, params)
    assert wrap_group_key(key, 7, random.Random(9)) == wrap_group_key(key, 7, random.Random(9))
    with pytest.raises(GroupAuthError):
        wrap_group_key(key[:16], 7)


def test_degenerate_peers_are_refused(line):
    _, params, (c1, _) = line
    with pytest.raises(GroupAuthError):
        shared_point(c1, PublicPair(3, TOY.identity), params)
    with pytest.raises(GroupAuthError):
        shared_point(Credential(3, 0, TOY.identity), c1.public, params)


def test_toy_brute_force_finds_exactly_the_share():
    station = ControlStation(TOY, 2, random.Random(5))
    a, b = station.issue(2)
    wrapped = wrap_group_key(derive_pairwise_key(a, b.public, station.params), station.group_key, random.Random(0))
    assert brute_force_shares(wrapped, a.public_point, TOY) == [b.private_share]
    with pytest.raises(GroupAuthError):
        brute_force_shares(wrapped, a.public_point, default_curve())


def test_public_pair_encoding(curve):
    pair = PublicPair(5, curve.mul(9, curve.generator))
    assert PublicPair.from_bytes(pair.to_bytes(), curve) == pair
    with pytest.raises(GroupAuthError):
        PublicPair.from_bytes((0).to_bytes(32, "big") + pair.public_point.to_bytes(), curve)


@pytest.mark.parametrize("kind", ["toy", "curve"])
def test_keyset_files_round_trip(tmp_path, kind, curve):
    group = TOY if kind == "toy" else curve
    station = ControlStation(group, 3, random.Random(4))
    creds = station.issue(4)
    save_keyset(tmp_path, station.params, creds)
    params, loaded = load_keyset(tmp_path)
    assert params == station.params
    assert loaded == creds


def test_keyset_detects_tampered_share(tmp_path):
    station = ControlStation(TOY, 2, random.Random(4))
    creds = station.issue(2)
    bad = [Credential(creds[0].index, (creds[0].private_share + 1) % 31, creds[0].public_point), creds[1]]
    save_keyset(tmp_path, station.params, bad)
    with pytest.raises(GroupAuthError):
        load_keyset(tmp_path)
