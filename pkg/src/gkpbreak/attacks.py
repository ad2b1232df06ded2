"""Key-recovery attacks on the three schemes.

Attack functions only ever see what an adversary would hold: captured
shares or tokens, leaked group keys, N and the public identifiers.  None of
them touches KGC state; tests compare their outputs with the reference keys
computed separately.

Both schemes collapse to the same shape.  With ``z_r`` the ratio of node r's
"identity value" to its "zero value", every group key is

    K(G) = C * prod_{j in G} z_j

for one unknown constant C (``f(0)**l`` for Harn-Hsu, ``prod_v f_v(0)`` for
Albakri-Harn).  Learning the z's plus one key gives C and hence all keys.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import OwnerInGroup, SameOwner, ShapeMismatch
from .modmath import Residue
from .polyring import ExpandedToken
from .schemes import (
    Group,
    GroupKey,
    PublicParams,
    ShareSet,
    SystemParams,
    ah_member_key,
    auth_prove,
    canonical_group,
    hh_member_key,
)


def _product(values: Iterable[Residue], n: int) -> Residue:
    acc = Residue(1, n)
    for v in values:
        acc = acc * v
    return acc


# -- Harn-Hsu / Harn-Gong ------------------------------------------------------


@dataclass(frozen=True)
class HHAttackState:
    z: tuple[Residue, ...]
    f0_pow_ell: Residue

    @property
    def ell(self) -> int:
        return len(self.z)


def hh_extract_z(shares: ShareSet, share_index: int = 0) -> tuple[Residue, ...]:
    """z_r = s(ID_r) / s(0) for every node r, from a single share polynomial."""
    s = shares.shares[share_index]
    s0 = s(0)
    return tuple(s(ident) / s0 for ident in shares.params.ids)


@dataclass(frozen=True)
class HHKeyOracle:
    """K(G) = f(0)**l * prod_{j in G} z_j for any group G."""

    state: HHAttackState

    def __call__(self, group: Iterable[int]) -> GroupKey:
        g = canonical_group(group, self.state.ell)
        value = self.state.f0_pow_ell * _product((self.state.z[j - 1] for j in g), self.state.f0_pow_ell.modulus)
        return GroupKey(value, g)


def hh_insider_oracle(shares: ShareSet) -> HHKeyOracle:
    """Turn one node's shares into a key oracle for every group, member or not."""
    pub = shares.params
    z = hh_extract_z(shares)
    k_all = hh_member_key(shares, pub.nodes)
    f0_pow_ell = k_all.value / _product(z, pub.n)
    return HHKeyOracle(HHAttackState(z, f0_pow_ell))


def hh_outsider_attack(k1: GroupKey, k2: GroupKey, k3: GroupKey) -> tuple[Residue, GroupKey]:
    """From K(S2 + {y}), K(S2) and K(S3) with y in S3, derive K(S3 - {y})."""
    extra = set(k1.group) - set(k2.group)
    if len(extra) != 1 or not set(k2.group) <= set(k1.group):
        raise ShapeMismatch(f"{k1.group} is not {k2.group} plus exactly one node")
    (y,) = extra
    if y not in k3.group:
        raise ShapeMismatch(f"node {y} is not in {k3.group}")
    z_y = k1.value / k2.value
    g4 = tuple(j for j in k3.group if j != y)
    return z_y, GroupKey(k3.value / z_y, g4)


# -- Albakri-Harn --------------------------------------------------------------


@dataclass(frozen=True)
class AHAttackState:
    """Recovered ratios.  ``w[(r, s)] = f_{r,s} / f_{r,0}`` and ``z[r] = f_r(ID_r) / f_{r,0}``."""

    owners: tuple[int, ...]
    z: Mapping[int, Residue]
    w: Mapping[tuple[int, int], Residue] = field(default_factory=dict)
    prod_f0: Residue | None = None


def ah_ratio_recovery(token: ExpandedToken, params: SystemParams | PublicParams) -> AHAttackState:
    """Stage 1: divide token coefficients to learn every foreign polynomial up to scale."""
    zero = (0,) * len(token.variable_indices)
    base = token.coeff(zero)
    w: dict[tuple[int, int], Residue] = {}
    z: dict[int, Residue] = {}
    for pos, r in enumerate(token.variable_indices):
        ident = params.id_of(r)
        z_r = Residue(1, base.modulus)
        for s in range(1, token.degree_bound + 1):
            e = list(zero)
            e[pos] = s
            w_rs = token.coeff(tuple(e)) / base
            w[(r, s)] = w_rs
            z_r = z_r + w_rs * ident**s
        z[r] = z_r
    return AHAttackState((token.owner_index,), z, w)


@dataclass(frozen=True)
class AHKeyOracle:
    """K(G) = prod_{j in G} z_j * prod_v f_v(0), answered for groups avoiding ``excluded``."""

    state: AHAttackState
    ell: int
    excluded: tuple[int, ...] = ()

    def __call__(self, group: Iterable[int]) -> GroupKey:
        g = canonical_group(group, self.ell)
        blocked = set(g) & set(self.excluded)
        if blocked:
            raise OwnerInGroup(f"z for node(s) {sorted(blocked)} is unknown to this oracle")
        value = self.state.prod_f0 * _product((self.state.z[j] for j in g), self.state.prod_f0.modulus)
        return GroupKey(value, g)


def ah_collusion_oracle(
    token_a: ExpandedToken, token_b: ExpandedToken, params: SystemParams | PublicParams
) -> AHKeyOracle:
    """Stage 2: two tokens give every z, and the all-nodes key then gives prod f_v(0)."""
    a, b = token_a.owner_index, token_b.owner_index
    if a == b:
        raise SameOwner(f"both tokens belong to node {a}")
    rec_a = ah_ratio_recovery(token_a, params)
    rec_b = ah_ratio_recovery(token_b, params)
    z = dict(rec_a.z)
    z[a] = rec_b.z[a]
    w = {**rec_b.w, **rec_a.w}
    ell = len(params.ids)
    k_all = ah_member_key(token_a, range(1, ell + 1), params)
    prod_f0 = k_all.value / _product(z.values(), k_all.value.modulus)
    return AHKeyOracle(AHAttackState((a, b), z, w, prod_f0), ell)


def ah_outsider_key_oracle(
    token: ExpandedToken, leaked: GroupKey, params: SystemParams | PublicParams
) -> AHKeyOracle:
    """One token plus one key for a group without the owner: all keys the owner is barred from."""
    owner = token.owner_index
    if owner in leaked.group:
        raise OwnerInGroup(f"leaked group {leaked.group} contains node {owner}")
    rec = ah_ratio_recovery(token, params)
    prod_f0 = leaked.value / _product((rec.z[j] for j in leaked.group), leaked.value.modulus)
    state = AHAttackState(rec.owners, rec.z, rec.w, prod_f0)
    return AHKeyOracle(state, len(params.ids), excluded=(owner,))


def ah_simplified_z(k_full: GroupKey, k_minus_i: GroupKey, i: int) -> Residue:
    """z_i = K(all nodes) / K(all nodes except i)."""
    full = tuple(range(1, len(k_full.group) + 1))
    if k_full.group != full:
        raise ShapeMismatch(f"{k_full.group} is not the set of all nodes")
    if i not in full or k_minus_i.group != tuple(j for j in full if j != i):
        raise ShapeMismatch(f"{k_minus_i.group} is not all nodes except {i}")
    return k_full.value / k_minus_i.value


def ah_simplified_recovery(token: ExpandedToken, params: SystemParams | PublicParams) -> AHAttackState:
    """z_r for every r other than the owner, using only keys the owner may compute.

    Needs at least three nodes so that each "all but r" group still has two
    members including the owner.
    """
    owner = token.owner_index
    nodes = tuple(range(1, len(params.ids) + 1))
    if len(nodes) < 3:
        raise ShapeMismatch("the simplified attack needs at least three nodes")
    k_full = ah_member_key(token, nodes, params)
    z = {}
    for r in nodes:
        if r == owner:
            continue
        k_minus = ah_member_key(token, [j for j in nodes if j != r], params)
        z[r] = ah_simplified_z(k_full, k_minus, r)
    return AHAttackState((owner,), z)


# -- key-based group authentication --------------------------------------------


def cheng_impersonate(shares: ShareSet, target_group: Iterable[int], challenge: bytes) -> bytes:
    """Answer an authentication challenge for a group the share holder is not in."""
    g: Group = canonical_group(target_group, shares.params.ell)
    if shares.owner_index in g:
        raise ShapeMismatch(f"node {shares.owner_index} already belongs to {g}")
    key = hh_insider_oracle(shares)(g)
    return auth_prove(key, challenge)
