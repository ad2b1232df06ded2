import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gkpbreak.attacks import (
    ah_collusion_oracle,
    ah_outsider_key_oracle,
    ah_ratio_recovery,
    ah_simplified_recovery,
    ah_simplified_z,
    cheng_impersonate,
    hh_extract_z,
    hh_insider_oracle,
    hh_outsider_attack,
)
from gkpbreak.errors import OwnerInGroup, SameOwner, ShapeMismatch
from gkpbreak.fixtures import ah_fixture, hh_fixture
from gkpbreak.polyring import eval_uni
from gkpbreak.schemes import (
    GroupKey,
    ah_member_key,
    ah_reference_key,
    all_groups,
    auth_verify,
    hh_member_key,
    hh_reference_key,
)

from .conftest import build, r77


class TestHarnHsuWorked:
    def test_extract_z(self):
        _, _, shares = hh_fixture()
        assert [z.value for z in hh_extract_z(shares[0])] == [41, 4]
        assert [z.value for z in hh_extract_z(shares[1])] == [41, 4]

    def test_insider(self):
        params, kgc, shares = hh_fixture()
        oracle = hh_insider_oracle(shares[0])
        assert oracle.state.f0_pow_ell == r77(4)
        assert oracle([2]).value == r77(16) == hh_reference_key(kgc, params, [2]).value
        assert oracle([1, 2]) == hh_member_key(shares[0], [1, 2])

    def test_outsider(self):
        params, kgc, _ = hh_fixture()
        k1 = hh_reference_key(kgc, params, [1, 2])
        k2 = hh_reference_key(kgc, params, [2])
        z1, k4 = hh_outsider_attack(k1, k2, k1)
        assert z1 == r77(41)
        assert k4 == hh_reference_key(kgc, params, [2])

    def test_outsider_shape(self):
        params, kgc, _ = hh_fixture()
        k1 = hh_reference_key(kgc, params, [1, 2])
        k2 = hh_reference_key(kgc, params, [2])
        with pytest.raises(ShapeMismatch):
            hh_outsider_attack(k1, k2, k2)
        with pytest.raises(ShapeMismatch):
            hh_outsider_attack(k2, k1, k1)


class TestHarnHsu:
    @pytest.mark.parametrize("scheme", ["hh", "hg"])
    def test_z_against_secrets(self, scheme):
        params, kgc, shares = build(scheme, 5, 3, seed=1)
        f0 = eval_uni(kgc.f, 0)
        for ss in shares:
            for j in range(len(ss.shares)):
                z = hh_extract_z(ss, j)
                assert z == hh_extract_z(ss, 0)
                for r, z_r in enumerate(z, start=1):
                    assert z_r * f0 == eval_uni(kgc.f, params.id_of(r))

    @pytest.mark.parametrize("scheme", ["hh", "hg"])
    @pytest.mark.parametrize("ell", [2, 3, 4, 5, 6])
    def test_insider_every_group(self, scheme, ell):
        params, kgc, shares = build(scheme, ell, 2, seed=ell)
        for ss in shares:
            oracle = hh_insider_oracle(ss)
            assert oracle.state.f0_pow_ell == eval_uni(kgc.f, 0) ** ell
            for g in all_groups(ell, 1):
                assert oracle(g) == hh_reference_key(kgc, params, g)

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 10**6), ell=st.integers(3, 6))
    def test_outsider_random(self, seed, ell):
        params, kgc, _ = build("hh", ell, 2, seed=seed % 50)
        rng = random.Random(seed)
        y = rng.randint(1, ell)
        rest = [j for j in params.nodes if j != y]
        s2 = rng.sample(rest, rng.randint(1, len(rest)))
        s3 = [y, *rng.sample(rest, rng.randint(1, len(rest)))]
        keys = [hh_reference_key(kgc, params, g) for g in ([y, *s2], s2, s3)]
        z_y, k4 = hh_outsider_attack(*keys)
        assert z_y * eval_uni(kgc.f, 0) == eval_uni(kgc.f, params.id_of(y))
        assert k4 == hh_reference_key(kgc, params, k4.group)
        assert y not in k4.group

    def test_outsider_y_not_in_s3(self):
        params, kgc, _ = build("hh", 4, 2, seed=0)
        keys = [hh_reference_key(kgc, params, g) for g in ([1, 2], [2], [3, 4])]
        with pytest.raises(ShapeMismatch):
            hh_outsider_attack(*keys)


class TestCheng:
    def test_accepted(self):
        params, kgc, shares = build("hh", 5, 3, seed=2)
        target = (2, 4, 5)
        resp = cheng_impersonate(shares[0], target, b"challenge")
        assert auth_verify(hh_member_key(shares[1], target), b"challenge", resp)

    def test_owner_in_target(self):
        _, _, shares = build("hh", 4, 2, seed=2)
        with pytest.raises(ShapeMismatch):
            cheng_impersonate(shares[0], (1, 2), b"c")

    def test_response_depends_on_challenge(self):
        _, _, shares = build("hh", 4, 2, seed=2)
        assert cheng_impersonate(shares[0], (2, 3), b"a") != cheng_impersonate(shares[0], (2, 3), b"b")


class TestAlbakriHarnWorked:
    def test_ratio_recovery(self):
        params, _, tokens = ah_fixture()
        rec1 = ah_ratio_recovery(tokens[0], params)
        assert rec1.w[(2, 1)] == r77(4) and rec1.z[2] == r77(9)
        rec2 = ah_ratio_recovery(tokens[1], params)
        assert rec2.w[(1, 1)] == r77(40) and rec2.z[1] == r77(41)

    def test_collusion(self):
        params, kgc, tokens = ah_fixture()
        oracle = ah_collusion_oracle(tokens[0], tokens[1], params)
        assert oracle.state.z == {1: r77(41), 2: r77(9)}
        assert oracle.state.prod_f0 == r77(2)
        assert oracle([1]).value == r77(5) == ah_reference_key(kgc, params, [1]).value

    def test_same_owner(self):
        params, _, tokens = ah_fixture()
        with pytest.raises(SameOwner):
            ah_collusion_oracle(tokens[0], tokens[0], params)

    def test_leaked_key(self):
        params, kgc, tokens = ah_fixture()
        leaked = ah_reference_key(kgc, params, [2])
        assert leaked.value == r77(18)
        oracle = ah_outsider_key_oracle(tokens[0], leaked, params)
        assert oracle.state.prod_f0 == r77(2)
        assert oracle([2]) == leaked
        with pytest.raises(OwnerInGroup):
            oracle([1, 2])

    def test_leaked_key_owner_in_group(self):
        params, kgc, tokens = ah_fixture()
        with pytest.raises(OwnerInGroup):
            ah_outsider_key_oracle(tokens[0], ah_reference_key(kgc, params, [1, 2]), params)

    def test_simplified(self):
        params, kgc, _ = ah_fixture()
        k_full = ah_reference_key(kgc, params, [1, 2])
        k_minus = ah_reference_key(kgc, params, [1])
        z2 = ah_simplified_z(k_full, k_minus, 2)
        assert z2 == r77(9)
        assert z2 * k_minus.value == k_full.value

    def test_simplified_shape(self):
        params, kgc, _ = ah_fixture()
        k_full = ah_reference_key(kgc, params, [1, 2])
        with pytest.raises(ShapeMismatch):
            ah_simplified_z(k_full, ah_reference_key(kgc, params, [2]), 2)
        with pytest.raises(ShapeMismatch):
            ah_simplified_z(ah_reference_key(kgc, params, [1]), k_full, 2)


def _secret_z(kgc, params, r):
    f = kgc.poly(r)
    return eval_uni(f, params.id_of(r)) / f.constant()


class TestAlbakriHarn:
    @pytest.mark.parametrize("ell,t", [(2, 2), (3, 3), (4, 4), (5, 2)])
    def test_stage_one_against_secrets(self, ell, t):
        params, kgc, tokens = build("ah", ell, t, seed=ell * t)
        for tok in tokens:
            rec = ah_ratio_recovery(tok, params)
            assert set(rec.z) == set(params.nodes) - {tok.owner_index}
            for r in rec.z:
                f = kgc.poly(r)
                for s in range(1, t):
                    assert rec.w[(r, s)] * f.constant() == f.coeffs[s]
                assert rec.z[r] == _secret_z(kgc, params, r)

    @pytest.mark.parametrize("ell,t", [(3, 2), (4, 3), (5, 2)])
    def test_collusion_every_group(self, ell, t):
        params, kgc, tokens = build("ah", ell, t, seed=ell)
        for a in params.nodes:
            for b in params.nodes:
                if a == b:
                    continue
                oracle = ah_collusion_oracle(tokens[a - 1], tokens[b - 1], params)
                for g in all_groups(ell, 0):
                    assert oracle(g) == ah_reference_key(kgc, params, g)

    def test_collusion_excluding_both(self):
        params, kgc, tokens = build("ah", 4, 3, seed=9)
        oracle = ah_collusion_oracle(tokens[0], tokens[1], params)
        assert oracle((3, 4)) == ah_reference_key(kgc, params, (3, 4))

    @pytest.mark.parametrize("ell,t", [(3, 3), (4, 2), (5, 3)])
    def test_leaked_key_every_excluded_group(self, ell, t):
        params, kgc, tokens = build("ah", ell, t, seed=ell + 1)
        for tok in tokens:
            owner = tok.owner_index
            outside = [g for g in all_groups(ell, 1) if owner not in g]
            for leaked_group in outside:
                oracle = ah_outsider_key_oracle(tok, ah_reference_key(kgc, params, leaked_group), params)
                for g in outside:
                    assert oracle(g) == ah_reference_key(kgc, params, g)

    @pytest.mark.parametrize("ell", [3, 4, 5])
    def test_simplified_recovery_uses_member_keys_only(self, ell):
        params, kgc, tokens = build("ah", ell, 3, seed=ell)
        for tok in tokens:
            rec = ah_simplified_recovery(tok, params)
            assert rec.z == ah_ratio_recovery(tok, params).z
            for r, z in rec.z.items():
                assert z == _secret_z(kgc, params, r)

    def test_simplified_needs_three_nodes(self):
        params, _, tokens = ah_fixture()
        with pytest.raises(ShapeMismatch):
            ah_simplified_recovery(tokens[0], params)

    def test_simplified_all_i(self):
        params, kgc, tokens = build("ah", 4, 2, seed=5)
        k_full = ah_member_key(tokens[0], params.nodes, params)
        for i in params.nodes:
            minus = tuple(j for j in params.nodes if j != i)
            z_i = ah_simplified_z(k_full, ah_reference_key(kgc, params, minus), i)
            assert z_i == _secret_z(kgc, params, i)


def test_hh_outsider_uses_only_keys():
    # the attack never sees KGC state: it works on bare GroupKey values
    k1 = GroupKey(r77(40), (1, 2))
    k2 = GroupKey(r77(16), (2,))
    z, k4 = hh_outsider_attack(k1, k2, k1)
    assert (z.value, k4.value.value, k4.group) == (41, 16, (2,))
