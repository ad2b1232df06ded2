"""Canonical JSON for the public artefacts: params, shares, tokens, keys.

Ring elements are written as decimal strings, node indices as plain JSON
integers, and objects with sorted keys, so ``dumps(loads(text)) == text``
for anything produced by :func:`dumps`.
"""

from __future__ import annotations

import json
from typing import Any

from .modmath import Residue
from .polyring import ExpandedToken, UniPoly
from .schemes import GroupKey, PublicParams, ShareSet, SystemParams


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def _exp_key(exps: tuple[int, ...]) -> str:
    return ",".join(str(k) for k in exps)


def _parse_exp_key(key: str) -> tuple[int, ...]:
    return tuple(int(k) for k in key.split(",")) if key else ()


def params_to_dict(params: PublicParams | SystemParams) -> dict:
    if isinstance(params, SystemParams):
        params = params.public()
    return {"kind": "public_params", "n": str(params.n), "ids": [str(i.value) for i in params.ids]}


def params_from_dict(d: dict) -> PublicParams:
    n = int(d["n"])
    return PublicParams(n, tuple(Residue(int(v), n) for v in d["ids"]))


def share_set_to_dict(shares: ShareSet) -> dict:
    return {
        "kind": "share_set",
        "owner": shares.owner_index,
        "params": params_to_dict(shares.params),
        "shares": [[str(v) for v in s.ints()] for s in shares.shares],
    }


def share_set_from_dict(d: dict) -> ShareSet:
    params = params_from_dict(d["params"])
    polys = tuple(UniPoly.from_ints([int(v) for v in s], params.n) for s in d["shares"])
    return ShareSet(int(d["owner"]), polys, params)


def token_to_dict(token: ExpandedToken) -> dict:
    return {
        "kind": "expanded_token",
        "owner": token.owner_index,
        "variables": list(token.variable_indices),
        "degree_bound": token.degree_bound,
        "n": str(token.modulus),
        "coefficients": {_exp_key(e): str(c.value) for e, c in token.coefficients.items()},
    }


def token_from_dict(d: dict) -> ExpandedToken:
    n = int(d["n"])
    return ExpandedToken(
        owner_index=int(d["owner"]),
        variable_indices=tuple(int(v) for v in d["variables"]),
        degree_bound=int(d["degree_bound"]),
        coefficients={_parse_exp_key(k): Residue(int(v), n) for k, v in d["coefficients"].items()},
    )


def group_key_to_dict(key: GroupKey) -> dict:
    return {
        "kind": "group_key",
        "group": list(key.group),
        "n": str(key.value.modulus),
        "value": str(key.value.value),
    }


def group_key_from_dict(d: dict) -> GroupKey:
    return GroupKey(Residue(int(d["value"]), int(d["n"])), tuple(int(j) for j in d["group"]))


_ENCODERS = {
    PublicParams: params_to_dict,
    SystemParams: params_to_dict,
    ShareSet: share_set_to_dict,
    ExpandedToken: token_to_dict,
    GroupKey: group_key_to_dict,
}

_DECODERS = {
    "public_params": params_from_dict,
    "share_set": share_set_from_dict,
    "expanded_token": token_from_dict,
    "group_key": group_key_from_dict,
}


def to_dict(obj) -> dict:
    try:
        return _ENCODERS[type(obj)](obj)
    except KeyError:
        raise TypeError(f"cannot serialize {type(obj).__name__}") from None


def from_dict(d: dict):
    kind = d.get("kind")
    if kind not in _DECODERS:
        raise ValueError(f"unknown document kind {kind!r}")
    return _DECODERS[kind](d)


def dumps(obj) -> str:
    return canonical_json(to_dict(obj))


def loads(text: str):
    return from_dict(json.loads(text))
