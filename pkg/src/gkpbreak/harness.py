"""Seeded end-to-end scenarios: build a system, run one attack, check every key."""

from __future__ import annotations

import hashlib
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Any, Callable, Iterable, Mapping, Sequence

from . import fixtures
from .attacks import (
    ah_collusion_oracle,
    ah_outsider_key_oracle,
    ah_simplified_recovery,
    cheng_impersonate,
    hh_insider_oracle,
    hh_outsider_attack,
)
from .errors import ConfigError, GkpError
from .modmath import gen_modulus
from .polyring import DEFAULT_EXPANSION_CAP
from .schemes import (
    Group,
    GroupKey,
    ah_member_key,
    ah_reference_key,
    ah_setup,
    all_groups,
    auth_verify,
    hg_setup,
    hh_member_key,
    hh_reference_key,
    hh_setup,
    make_params,
)
from .serialize import canonical_json

SCHEMES = ("harn_hsu", "harn_gong", "albakri_harn")
ATTACKS = {
    "insider": ("harn_hsu", "harn_gong"),
    "outsider": ("harn_hsu", "harn_gong"),
    "impersonate": ("harn_hsu", "harn_gong"),
    "collude": ("albakri_harn",),
    "leaked_key": ("albakri_harn",),
    "simplified": ("albakri_harn",),
}
CAPTURE_COUNT = {"insider": 1, "impersonate": 1, "collude": 2, "leaked_key": 1, "simplified": 1, "outsider": 0}


def _group(value) -> Group | None:
    if value is None:
        return None
    if isinstance(value, str):
        value = [int(v) for v in value.replace(" ", "").split(",") if v]
    return tuple(sorted({int(v) for v in value}))


@dataclass(frozen=True)
class ScenarioConfig:
    scheme: str = "harn_hsu"
    attack: str = "insider"
    ell: int = 4
    degree: int = 2
    prime_bits: int = 32
    seed: int = 0
    fixture: bool = False
    captured: tuple[int, ...] = ()
    targets: tuple[Group, ...] | None = None
    leaked_group: Group | None = None
    # outsider attack: K(s2 + {y}), K(s2), K(s3) with y in s3
    s2: Group | None = None
    y: int | None = None
    s3: Group | None = None

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "ScenarioConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(sorted(unknown)[0], "unknown field")
        kw = dict(data)
        for name in ("ell", "degree", "prime_bits", "seed"):
            if name in kw:
                try:
                    kw[name] = int(kw[name])
                except (TypeError, ValueError):
                    raise ConfigError(name, f"expected an integer, got {kw[name]!r}") from None
        if "y" in kw and kw["y"] is not None:
            kw["y"] = int(kw["y"])
        if "fixture" in kw:
            kw["fixture"] = bool(kw["fixture"])
        if "captured" in kw:
            kw["captured"] = _group(kw["captured"]) or ()
        for name in ("leaked_group", "s2", "s3"):
            if name in kw:
                kw[name] = _group(kw[name])
        if kw.get("targets") is not None:
            targets = kw["targets"]
            if isinstance(targets, str):
                targets = [t for t in targets.split(";") if t.strip()]
            kw["targets"] = tuple(_group(t) for t in targets)
        return cls(**kw)

    def to_dict(self) -> dict:
        d = asdict(self)
        for name in ("captured", "leaked_group", "s2", "s3"):
            if d[name] is not None:
                d[name] = list(d[name])
        if d["targets"] is not None:
            d["targets"] = [list(t) for t in d["targets"]]
        return d

    def validated(self) -> "ScenarioConfig":
        """Check ranges and fill attack defaults; raises :class:`ConfigError`."""
        if self.scheme not in SCHEMES:
            raise ConfigError("scheme", f"must be one of {', '.join(SCHEMES)}")
        if self.attack not in ATTACKS:
            raise ConfigError("attack", f"must be one of {', '.join(ATTACKS)}")
        if self.scheme not in ATTACKS[self.attack]:
            raise ConfigError("attack", f"{self.attack} does not apply to {self.scheme}")
        cfg = self
        if cfg.fixture:
            if cfg.ell != 2:
                raise ConfigError("ell", "fixture mode pins the two-node instance")
            fixed_degree = len(fixtures.AH_F[0]) if cfg.scheme == "albakri_harn" else len(fixtures.HH_F) - 1
            cfg = replace(cfg, degree=fixed_degree, prime_bits=fixtures.WORKED_MODULUS.q.bit_length())
        else:
            if cfg.ell < 2:
                raise ConfigError("ell", "need at least 2 nodes")
            if cfg.degree < 2:
                raise ConfigError("degree", "must be at least 2")
            if cfg.prime_bits < 8:
                raise ConfigError("prime_bits", "must be at least 8")
            if cfg.scheme == "albakri_harn" and cfg.degree ** (cfg.ell - 1) > DEFAULT_EXPANSION_CAP:
                raise ConfigError("degree", f"t**(ell-1) exceeds the token cap {DEFAULT_EXPANSION_CAP}")
        ell = cfg.ell
        nodes = range(1, ell + 1)

        need = CAPTURE_COUNT[cfg.attack]
        captured = cfg.captured or tuple(range(1, need + 1))
        if len(captured) != need or len(set(captured)) != need:
            raise ConfigError("captured", f"{cfg.attack} needs {need} distinct captured node(s)")
        if any(c not in nodes for c in captured):
            raise ConfigError("captured", f"indices must lie in 1..{ell}")
        cfg = replace(cfg, captured=tuple(captured))

        for name in ("leaked_group", "s2", "s3"):
            g = getattr(cfg, name)
            if g is not None and any(j not in nodes for j in g):
                raise ConfigError(name, f"indices must lie in 1..{ell}")
        if cfg.targets is not None:
            for t in cfg.targets:
                if not t or any(j not in nodes for j in t):
                    raise ConfigError("targets", f"group {t} is empty or outside 1..{ell}")

        if cfg.attack in ("leaked_key", "simplified"):
            owner = captured[0]
            leaked = cfg.leaked_group or tuple(j for j in nodes if j != owner)
            if owner in leaked or not leaked:
                raise ConfigError("leaked_group", "must be non-empty and exclude the captured node")
            cfg = replace(cfg, leaked_group=leaked)
            if cfg.attack == "simplified" and ell < 3:
                raise ConfigError("ell", "the simplified attack needs at least 3 nodes")
            if cfg.targets and any(owner in t for t in cfg.targets):
                raise ConfigError("targets", "groups must exclude the captured node")
        if cfg.attack == "impersonate" and cfg.targets and any(captured[0] in t for t in cfg.targets):
            raise ConfigError("targets", "groups must exclude the impersonating node")
        if cfg.attack == "outsider":
            cfg = _outsider_defaults(cfg)
        return cfg


def _outsider_defaults(cfg: ScenarioConfig) -> ScenarioConfig:
    ell = cfg.ell
    if cfg.s2 is None and cfg.y is None and cfg.s3 is None:
        rng = random.Random(f"gkpbreak/{cfg.seed}/outsider")
        y = rng.randint(1, ell)
        rest = [j for j in range(1, ell + 1) if j != y]
        s2 = tuple(sorted(rng.sample(rest, rng.randint(1, len(rest)))))
        s3 = tuple(sorted({y, *rng.sample(rest, rng.randint(1, len(rest)))}))
        return replace(cfg, s2=s2, y=y, s3=s3)
    if cfg.s2 is None or cfg.y is None or cfg.s3 is None:
        raise ConfigError("s2", "outsider attack needs s2, y and s3 together")
    if not cfg.s2 or cfg.y in cfg.s2 or not 1 <= cfg.y <= ell:
        raise ConfigError("y", "y must be a node outside the non-empty group s2")
    if cfg.y not in cfg.s3 or len(cfg.s3) < 2:
        raise ConfigError("s3", "s3 must contain y and at least one other node")
    return cfg


@dataclass
class VerdictReport:
    config: dict
    records: list[dict] = field(default_factory=list)
    recovered_state: dict = field(default_factory=dict)
    error: str | None = None
    duration_seconds: float = 0.0

    @property
    def verdict(self) -> bool:
        return self.error is None and bool(self.records) and all(r["match"] and r.get("accepted", True) for r in self.records)

    def to_dict(self, include_duration: bool = True) -> dict:
        d = {
            "config": self.config,
            "records": self.records,
            "recovered_state": self.recovered_state,
            "error": self.error,
            "verdict": self.verdict,
        }
        if include_duration:
            d["duration_seconds"] = round(self.duration_seconds, 6)
        return d

    def to_json(self, include_duration: bool = True) -> str:
        return canonical_json(self.to_dict(include_duration))


def _record(group: Group, attacker: GroupKey, reference: GroupKey, attacker_index: Sequence[int], **extra) -> dict:
    a, r = str(attacker.value.value), str(reference.value.value)
    rec = {
        "group": list(group),
        "attacker_key": a,
        "reference_key": r,
        "match": a == r,
        "attacker_in_group": any(c in group for c in attacker_index),
    }
    rec.update(extra)
    return rec


def build_system(cfg: ScenarioConfig):
    if cfg.fixture:
        return {
            "harn_hsu": fixtures.hh_fixture,
            "harn_gong": fixtures.hg_fixture,
            "albakri_harn": fixtures.ah_fixture,
        }[cfg.scheme]()
    root_degree = cfg.ell - 1 if cfg.scheme == "harn_gong" and cfg.ell > 2 else None
    modulus = gen_modulus(cfg.prime_bits, cfg.seed, root_degree=root_degree)
    rng = random.Random(f"gkpbreak/{cfg.seed}/setup")
    params = make_params(cfg.ell, cfg.degree, modulus, rng)
    setup: Callable = {"harn_hsu": hh_setup, "harn_gong": hg_setup, "albakri_harn": ah_setup}[cfg.scheme]
    kgc, material = setup(params, rng)
    return params, kgc, material


def _observed_key(cfg, params, kgc, material, group: Group) -> GroupKey:
    """A key as seen on the wire: computed by a member when the group is a real one."""
    hh = cfg.scheme != "albakri_harn"
    if len(group) >= 2:
        holder = material[group[0] - 1]
        return hh_member_key(holder, group) if hh else ah_member_key(holder, group, params)
    return hh_reference_key(kgc, params, group) if hh else ah_reference_key(kgc, params, group)


def _challenge(seed: int, group: Group) -> bytes:
    return hashlib.sha256(f"gkpbreak/{seed}/challenge/{list(group)}".encode()).digest()


def _execute(cfg: ScenarioConfig, report: VerdictReport) -> None:
    params, kgc, material = build_system(cfg)
    ell = cfg.ell
    reference = hh_reference_key if cfg.scheme != "albakri_harn" else ah_reference_key
    captured = cfg.captured

    if cfg.attack == "insider":
        oracle = hh_insider_oracle(material[captured[0] - 1])
        report.recovered_state = {
            "z": [str(z.value) for z in oracle.state.z],
            "f0_pow_ell": str(oracle.state.f0_pow_ell.value),
        }
        for g in cfg.targets or all_groups(ell, 2):
            report.records.append(_record(g, oracle(g), reference(kgc, params, g), captured))

    elif cfg.attack == "impersonate":
        oracle = hh_insider_oracle(material[captured[0] - 1])
        targets = cfg.targets or [g for g in all_groups(ell, 2) if captured[0] not in g]
        for g in targets:
            challenge = _challenge(cfg.seed, g)
            response = cheng_impersonate(material[captured[0] - 1], g, challenge)
            legit = _observed_key(cfg, params, kgc, material, g)
            report.records.append(
                _record(g, oracle(g), legit, captured, accepted=auth_verify(legit, challenge, response))
            )

    elif cfg.attack == "outsider":
        s1 = tuple(sorted({*cfg.s2, cfg.y}))
        keys = [_observed_key(cfg, params, kgc, material, g) for g in (s1, cfg.s2, cfg.s3)]
        z_y, k4 = hh_outsider_attack(*keys)
        report.recovered_state = {"y": cfg.y, "z_y": str(z_y.value), "observed_groups": [list(k.group) for k in keys]}
        report.records.append(_record(k4.group, k4, reference(kgc, params, k4.group), ()))

    elif cfg.attack == "collude":
        a, b = captured
        oracle = ah_collusion_oracle(material[a - 1], material[b - 1], params)
        report.recovered_state = _ah_state_dict(oracle.state)
        for g in cfg.targets or all_groups(ell, 2):
            report.records.append(_record(g, oracle(g), reference(kgc, params, g), captured))

    elif cfg.attack in ("leaked_key", "simplified"):
        owner = captured[0]
        token = material[owner - 1]
        leaked = _observed_key(cfg, params, kgc, material, cfg.leaked_group)
        oracle = ah_outsider_key_oracle(token, leaked, params)
        if cfg.attack == "simplified":
            # swap in the z values learned from key ratios alone
            state = ah_simplified_recovery(token, params)
            prod_f0 = leaked.value
            for j in leaked.group:
                prod_f0 = prod_f0 / state.z[j]
            oracle = replace(oracle, state=replace(state, prod_f0=prod_f0))
        report.recovered_state = _ah_state_dict(oracle.state)
        report.recovered_state["leaked_group"] = list(leaked.group)
        min_size = 1 if ell == 2 else 2
        targets = cfg.targets or [g for g in all_groups(ell, min_size) if owner not in g]
        for g in targets:
            report.records.append(_record(g, oracle(g), reference(kgc, params, g), captured))


def _ah_state_dict(state) -> dict:
    return {
        "owners": list(state.owners),
        "z": {str(r): str(v.value) for r, v in sorted(state.z.items())},
        "w": {f"{r},{s}": str(v.value) for (r, s), v in sorted(state.w.items())},
        "prod_f0": None if state.prod_f0 is None else str(state.prod_f0.value),
    }


def run_scenario(config: ScenarioConfig) -> VerdictReport:
    """Run one scenario.  Config errors raise; attack errors land in the report."""
    cfg = config.validated()
    report = VerdictReport(config=cfg.to_dict())
    start = time.perf_counter()
    try:
        _execute(cfg, report)
    except GkpError as exc:
        report.error = f"{type(exc).__name__}: {exc}"
    report.duration_seconds = time.perf_counter() - start
    return report


def _run_safely(config: ScenarioConfig) -> VerdictReport:
    try:
        return run_scenario(config)
    except Exception as exc:  # noqa: BLE001 - a sweep never aborts on one item
        return VerdictReport(config=config.to_dict(), error=f"{type(exc).__name__}: {exc}")


def sweep(configs: Iterable[ScenarioConfig], parallelism: int = 1) -> list[VerdictReport]:
    """Run many scenarios, results in input order."""
    configs = list(configs)
    if parallelism < 1:
        raise ValueError("parallelism must be positive")
    if parallelism == 1 or len(configs) < 2:
        return [_run_safely(c) for c in configs]
    with ProcessPoolExecutor(max_workers=parallelism) as pool:
        return list(pool.map(_run_safely, configs))
