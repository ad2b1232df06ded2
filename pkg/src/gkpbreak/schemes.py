"""The three key pre-distribution schemes and a key-confirmation wrapper.

Harn-Hsu
    The KGC picks f of degree k.  Node i gets shares ``u_{i,j} * f(x)`` for
    j = 1..l-1 with ``prod_j u_{i,j} = f(ID_i)``.  The key of a group of size
    h is ``f(0)**(l-h) * prod_{j in group} f(ID_j)``.
Harn-Gong
    Harn-Hsu with all ``u_{i,j}`` equal to one (l-1)-th root of f(ID_i).
Albakri-Harn (basic scheme)
    The KGC picks f_1..f_l of degree t-1.  Node i gets the token
    ``f_i(ID_i) * prod_{j != i} f_j(x_j)`` multiplied out.  The key of a group
    is ``prod_{j in group} f_j(ID_j) * prod_{v not in group} f_v(0)``.

Node indices are 1-based throughout; groups are ascending tuples of indices.
"""

from __future__ import annotations

import hashlib
import hmac
import random
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .errors import ExpansionTooLarge, NoRoot, NotAMember
from .modmath import Modulus, Residue, is_nth_power, is_unit, nth_root, random_residue, random_unit
from .polyring import DEFAULT_EXPANSION_CAP, ExpandedToken, UniPoly, eval_token, expand_token, scale_poly

Group = tuple[int, ...]

HG_MAX_ATTEMPTS = 100_000


@dataclass(frozen=True)
class PublicParams:
    """What every node (and every attacker) knows: N and all identifiers."""

    n: int
    ids: tuple[Residue, ...]

    @property
    def ell(self) -> int:
        return len(self.ids)

    def id_of(self, index: int) -> Residue:
        return self.ids[index - 1]

    @property
    def nodes(self) -> Group:
        return tuple(range(1, self.ell + 1))


@dataclass(frozen=True)
class SystemParams:
    ell: int
    degree: int
    modulus: Modulus
    ids: tuple[Residue, ...]

    def __post_init__(self):
        if self.ell < 2:
            raise ValueError("need at least two nodes")
        if len(self.ids) != self.ell:
            raise ValueError(f"expected {self.ell} identifiers, got {len(self.ids)}")
        if len({i.value for i in self.ids}) != self.ell:
            raise ValueError("identifiers must be distinct")
        for ident in self.ids:
            if ident.modulus != self.modulus.n or not is_unit(ident):
                raise ValueError(f"identifier {ident.value} is not a unit mod N")

    def public(self) -> PublicParams:
        return PublicParams(self.modulus.n, self.ids)

    def id_of(self, index: int) -> Residue:
        return self.ids[index - 1]

    @property
    def nodes(self) -> Group:
        return tuple(range(1, self.ell + 1))


def make_params(ell: int, degree: int, modulus: Modulus, rng: random.Random) -> SystemParams:
    """System parameters with ``ell`` random distinct unit identifiers."""
    ids: list[Residue] = []
    while len(ids) < ell:
        cand = random_unit(modulus, rng)
        if cand not in ids:
            ids.append(cand)
    return SystemParams(ell, degree, modulus, tuple(ids))


def canonical_group(group: Iterable[int], ell: int, min_size: int = 0) -> Group:
    g = tuple(sorted(set(group)))
    if any(i < 1 or i > ell for i in g):
        raise ValueError(f"group {g} has indices outside 1..{ell}")
    if len(g) < min_size:
        raise ValueError(f"group {g} is smaller than {min_size}")
    return g


def all_groups(ell: int, min_size: int = 2) -> list[Group]:
    """Every subset of 1..ell with at least ``min_size`` members."""
    nodes = range(1, ell + 1)
    return [g for h in range(min_size, ell + 1) for g in combinations(nodes, h)]


@dataclass(frozen=True)
class GroupKey:
    value: Residue
    group: Group


def _product(values: Iterable[Residue], n: int) -> Residue:
    acc = Residue(1, n)
    for v in values:
        acc = acc * v
    return acc


def sample_poly(modulus: Modulus, degree: int, rng: random.Random) -> UniPoly:
    return UniPoly(tuple(random_residue(modulus, rng) for _ in range(degree + 1)))


# -- Harn-Hsu / Harn-Gong -----------------------------------------------------


@dataclass(frozen=True)
class HHKgcState:
    f: UniPoly
    u: tuple[tuple[Residue, ...], ...]


@dataclass(frozen=True)
class ShareSet:
    owner_index: int
    shares: tuple[UniPoly, ...]
    params: PublicParams


def _hh_poly_ok(f: UniPoly, params: SystemParams) -> bool:
    return is_unit(f(0)) and all(is_unit(f(i)) for i in params.ids)


def _sample_hh_poly(params: SystemParams, rng: random.Random) -> UniPoly:
    while True:
        f = sample_poly(params.modulus, params.degree, rng)
        if _hh_poly_ok(f, params):
            return f


def hh_issue(params: SystemParams, f: UniPoly, rng: random.Random) -> tuple[HHKgcState, list[ShareSet]]:
    """Split f(ID_i) into l-1 multiplicative factors per node and hand out scaled copies of f."""
    pub = params.public()
    rows = []
    sets = []
    for i in params.nodes:
        us = [random_unit(params.modulus, rng) for _ in range(params.ell - 2)]
        us.append(f(params.id_of(i)) / _product(us, pub.n))
        rows.append(tuple(us))
        sets.append(ShareSet(i, tuple(scale_poly(f, u) for u in us), pub))
    return HHKgcState(f, tuple(rows)), sets


def hh_setup(params: SystemParams, rng: random.Random) -> tuple[HHKgcState, list[ShareSet]]:
    f = _sample_hh_poly(params, rng)
    return hh_issue(params, f, rng)


def hg_issue(params: SystemParams, f: UniPoly) -> tuple[HHKgcState, list[ShareSet]]:
    """One share ``u_i * f`` per node with ``u_i**(l-1) = f(ID_i)``, replicated l-1 times.

    Raises :class:`NoRoot` if some f(ID_i) is not an (l-1)-th power.
    """
    pub = params.public()
    e = params.ell - 1
    rows = []
    sets = []
    for i in params.nodes:
        u = nth_root(f(params.id_of(i)), e, params.modulus)
        rows.append((u,) * e)
        share = scale_poly(f, u)
        sets.append(ShareSet(i, (share,) * e, pub))
    return HHKgcState(f, tuple(rows)), sets


def hg_setup(params: SystemParams, rng: random.Random) -> tuple[HHKgcState, list[ShareSet]]:
    e = params.ell - 1
    for _ in range(HG_MAX_ATTEMPTS):
        f = _sample_hh_poly(params, rng)
        if all(is_nth_power(f(i), e, params.modulus) for i in params.ids):
            return hg_issue(params, f)
    raise NoRoot(f"no polynomial with {params.ell - 1}-th roots at every identifier after {HG_MAX_ATTEMPTS} tries")


def _member_group(owner: int, group: Iterable[int], ell: int) -> Group:
    g = canonical_group(group, ell)
    if owner not in g:
        raise NotAMember(f"node {owner} is not in group {g}")
    if len(g) < 2:
        raise ValueError("group keys are defined for at least two members")
    return g


def hh_member_key(shares: ShareSet, group: Iterable[int]) -> GroupKey:
    pub = shares.params
    g = _member_group(shares.owner_index, group, pub.ell)
    others = [j for j in g if j != shares.owner_index]
    key = Residue(1, pub.n)
    for slot, share in enumerate(shares.shares):
        point = pub.id_of(others[slot]) if slot < len(others) else 0
        key = key * share(point)
    return GroupKey(key, g)


def hh_reference_key(kgc: HHKgcState, params: SystemParams | PublicParams, group: Iterable[int]) -> GroupKey:
    ell = len(params.ids)
    g = canonical_group(group, ell)
    f = kgc.f
    key = f(0) ** (ell - len(g)) * _product((f(params.id_of(j)) for j in g), f.modulus)
    return GroupKey(key, g)


# -- Albakri-Harn --------------------------------------------------------------


@dataclass(frozen=True)
class AHKgcState:
    polys: tuple[UniPoly, ...]

    def poly(self, index: int) -> UniPoly:
        return self.polys[index - 1]


def ah_issue(
    params: SystemParams, polys: Sequence[UniPoly], cap: int = DEFAULT_EXPANSION_CAP
) -> tuple[AHKgcState, list[ExpandedToken]]:
    kgc = AHKgcState(tuple(polys))
    tokens = []
    for i in params.nodes:
        scalar = kgc.poly(i)(params.id_of(i))
        foreign = [(j, kgc.poly(j)) for j in params.nodes if j != i]
        tokens.append(expand_token(scalar, foreign, owner_index=i, cap=cap))
    return kgc, tokens


def ah_setup(
    params: SystemParams, rng: random.Random, cap: int = DEFAULT_EXPANSION_CAP
) -> tuple[AHKgcState, list[ExpandedToken]]:
    t = params.degree
    size = t ** (params.ell - 1)
    if size > cap:
        raise ExpansionTooLarge(f"{size} token entries exceeds cap {cap}")
    polys = []
    for r in params.nodes:
        while True:
            f = sample_poly(params.modulus, t - 1, rng)
            if is_unit(f.constant()) and is_unit(f(params.id_of(r))):
                break
        polys.append(f)
    return ah_issue(params, polys, cap)


def ah_assignment(params: SystemParams | PublicParams, group: Group) -> dict[int, Residue | int]:
    return {j: (params.id_of(j) if j in group else 0) for j in range(1, len(params.ids) + 1)}


def ah_member_key(token: ExpandedToken, group: Iterable[int], params: SystemParams | PublicParams) -> GroupKey:
    g = _member_group(token.owner_index, group, len(params.ids))
    return GroupKey(eval_token(token, ah_assignment(params, g)), g)


def ah_reference_key(kgc: AHKgcState, params: SystemParams | PublicParams, group: Iterable[int]) -> GroupKey:
    ell = len(params.ids)
    g = canonical_group(group, ell)
    n = kgc.polys[0].modulus
    key = Residue(1, n)
    for j in range(1, ell + 1):
        f = kgc.poly(j)
        key = key * (f(params.id_of(j)) if j in g else f.constant())
    return GroupKey(key, g)


# -- key-confirmation wrapper --------------------------------------------------


def _auth_key(key: GroupKey) -> bytes:
    return hashlib.sha256(str(key.value.value).encode("ascii")).digest()


def auth_prove(key: GroupKey, challenge: bytes) -> bytes:
    """HMAC-SHA256 of the challenge under a digest of the group key."""
    return hmac.new(_auth_key(key), challenge, hashlib.sha256).digest()


def auth_verify(key: GroupKey, challenge: bytes, response: bytes) -> bool:
    return hmac.compare_digest(auth_prove(key, challenge), response)

