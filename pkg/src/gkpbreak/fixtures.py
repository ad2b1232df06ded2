"""Hand-checkable instances over Z_77 and their expected values.

N = 7 * 11, two nodes with identifiers 1 and 2.
Harn-Hsu / Harn-Gong use f(x) = 2 + 3x; Albakri-Harn uses f_1(x) = 2 + 3x and
f_2(x) = 1 + 4x.  Every number in GOLDEN was worked out by hand.
"""

from __future__ import annotations

import random

from .attacks import (
    ah_collusion_oracle,
    ah_outsider_key_oracle,
    ah_ratio_recovery,
    ah_simplified_z,
    hh_extract_z,
    hh_insider_oracle,
    hh_outsider_attack,
)
from .modmath import Modulus, Residue
from .polyring import UniPoly
from .schemes import (
    SystemParams,
    ah_issue,
    ah_member_key,
    ah_reference_key,
    hg_issue,
    hh_issue,
    hh_member_key,
    hh_reference_key,
)

WORKED_MODULUS = Modulus(7, 11)
N = WORKED_MODULUS.n

HH_F = (2, 3)
AH_F = ((2, 3), (1, 4))

GOLDEN = {
    "hh.share.1": [10, 15],
    "hh.share.2": [16, 24],
    "hh.key.12.member1": 40,
    "hh.key.12.member2": 40,
    "hh.reference.12": 40,
    "hh.reference.2": 16,
    "hh.z": [41, 4],
    "hh.f0_pow_ell": 4,
    "hh.insider.2": 16,
    "hh.outsider.z1": 41,
    "ah.token.1": {(0,): 5, (1,): 20},
    "ah.token.2": {(0,): 18, (1,): 27},
    "ah.key.12.member1": 45,
    "ah.key.12.member2": 45,
    "ah.reference.12": 45,
    "ah.reference.1": 5,
    "ah.w.2.1": 4,
    "ah.z.2": 9,
    "ah.w.1.1": 40,
    "ah.z.1": 41,
    "ah.prod_f0": 2,
    "ah.collusion.1": 5,
    "ah.leaked.prod_f0": 2,
    "ah.simplified.z2": 9,
}


def worked_params(degree: int) -> SystemParams:
    return SystemParams(2, degree, WORKED_MODULUS, (Residue(1, N), Residue(2, N)))


def hh_fixture():
    params = worked_params(len(HH_F) - 1)
    kgc, shares = hh_issue(params, UniPoly.from_ints(HH_F, N), random.Random(0))
    return params, kgc, shares


def hg_fixture():
    params = worked_params(len(HH_F) - 1)
    kgc, shares = hg_issue(params, UniPoly.from_ints(HH_F, N))
    return params, kgc, shares


def ah_fixture():
    params = worked_params(len(AH_F[0]))
    kgc, tokens = ah_issue(params, [UniPoly.from_ints(f, N) for f in AH_F])
    return params, kgc, tokens


def compute_fixture_values() -> dict:
    """Recompute every GOLDEN entry through the library."""
    out: dict = {}
    params, kgc, shares = hh_fixture()
    out["hh.share.1"] = shares[0].shares[0].ints()
    out["hh.share.2"] = shares[1].shares[0].ints()
    out["hh.key.12.member1"] = hh_member_key(shares[0], [1, 2]).value.value
    out["hh.key.12.member2"] = hh_member_key(shares[1], [1, 2]).value.value
    out["hh.reference.12"] = hh_reference_key(kgc, params, [1, 2]).value.value
    out["hh.reference.2"] = hh_reference_key(kgc, params, [2]).value.value
    out["hh.z"] = [z.value for z in hh_extract_z(shares[0])]
    oracle = hh_insider_oracle(shares[0])
    out["hh.f0_pow_ell"] = oracle.state.f0_pow_ell.value
    out["hh.insider.2"] = oracle([2]).value.value
    z1, _ = hh_outsider_attack(
        hh_reference_key(kgc, params, [1, 2]),
        hh_reference_key(kgc, params, [2]),
        hh_reference_key(kgc, params, [1, 2]),
    )
    out["hh.outsider.z1"] = z1.value

    params, kgc, tokens = ah_fixture()
    for i, token in enumerate(tokens, start=1):
        out[f"ah.token.{i}"] = {e: c.value for e, c in token.coefficients.items()}
    out["ah.key.12.member1"] = ah_member_key(tokens[0], [1, 2], params).value.value
    out["ah.key.12.member2"] = ah_member_key(tokens[1], [1, 2], params).value.value
    out["ah.reference.12"] = ah_reference_key(kgc, params, [1, 2]).value.value
    out["ah.reference.1"] = ah_reference_key(kgc, params, [1]).value.value
    rec1 = ah_ratio_recovery(tokens[0], params)
    rec2 = ah_ratio_recovery(tokens[1], params)
    out["ah.w.2.1"] = rec1.w[(2, 1)].value
    out["ah.z.2"] = rec1.z[2].value
    out["ah.w.1.1"] = rec2.w[(1, 1)].value
    out["ah.z.1"] = rec2.z[1].value
    coll = ah_collusion_oracle(tokens[0], tokens[1], params)
    out["ah.prod_f0"] = coll.state.prod_f0.value
    out["ah.collusion.1"] = coll([1]).value.value
    leaked = ah_outsider_key_oracle(tokens[0], ah_reference_key(kgc, params, [2]), params)
    out["ah.leaked.prod_f0"] = leaked.state.prod_f0.value
    out["ah.simplified.z2"] = ah_simplified_z(
        ah_reference_key(kgc, params, [1, 2]), ah_reference_key(kgc, params, [1]), 2
    ).value
    return out


def run_selftest() -> list[tuple[str, object, object, bool]]:
    got = compute_fixture_values()
    return [(name, want, got.get(name), got.get(name) == want) for name, want in GOLDEN.items()]
