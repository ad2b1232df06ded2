"""Command-line interface.

    gkpbreak setup  --scheme harn_hsu --ell 4 --seed 1 --out system.json
    gkpbreak key    --system system.json --node 2 --group 1,2,4
    gkpbreak attack insider --scheme harn_hsu --ell 4 --captured 2
    gkpbreak sweep  --config sweep.json --parallelism 4
    gkpbreak selftest
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import serialize
from .errors import ConfigError
from .fixtures import run_selftest
from .harness import ATTACKS, SCHEMES, ScenarioConfig, build_system, run_scenario, sweep
from .schemes import ShareSet, ah_member_key, hh_member_key

# flag dest -> ScenarioConfig field
_FLAG_FIELDS = {
    "scheme": "scheme",
    "ell": "ell",
    "degree": "degree",
    "prime_bits": "prime_bits",
    "seed": "seed",
    "fixture": "fixture",
    "captured": "captured",
    "targets": "targets",
    "leaked": "leaked_group",
    "s2": "s2",
    "y": "y",
    "s3": "s3",
}


def _add_system_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scheme", choices=SCHEMES)
    p.add_argument("--ell", type=int, help="number of nodes")
    p.add_argument("--degree", type=int, help="k for Harn-Hsu/Harn-Gong, t for Albakri-Harn")
    p.add_argument("--prime-bits", dest="prime_bits", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--fixture", action="store_true", default=None, help="use the worked Z_77 instance")
    p.add_argument("--config", type=Path, help="JSON scenario file; flags override it")
    p.add_argument("--out", type=Path, help="write output here instead of stdout")
    p.add_argument("--format", choices=["json"], default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gkpbreak", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("setup", help="generate a system and print every node's public material")
    _add_system_flags(p)

    p = sub.add_parser("key", help="compute a member's group key")
    _add_system_flags(p)
    p.add_argument("--system", type=Path, help="system document written by `setup`")
    p.add_argument("--node", type=int, required=True)
    p.add_argument("--group", required=True, help="comma-separated node indices")

    p = sub.add_parser("attack", help="run one attack and verify every recovered key")
    p.add_argument("kind", choices=sorted(ATTACKS))
    _add_system_flags(p)
    p.add_argument("--captured", help="captured node indices, e.g. 2 or 1,3")
    p.add_argument("--targets", help="groups to attack, e.g. '1,2;2,3,4'")
    p.add_argument("--leaked", help="group whose key leaked (leaked_key/simplified)")
    p.add_argument("--s2", help="outsider: the smaller known group")
    p.add_argument("--y", type=int, help="outsider: node separating the first two groups")
    p.add_argument("--s3", help="outsider: third known group, containing y")

    p = sub.add_parser("sweep", help="run a batch of scenarios from a config file")
    p.add_argument("--config", type=Path, required=True, help='JSON: {"scenarios": [...]} or a list')
    p.add_argument("--parallelism", type=int, default=1)
    p.add_argument("--out", type=Path)
    p.add_argument("--format", choices=["json"], default="json")

    sub.add_parser("selftest", help="check the worked Z_77 instances")
    return parser


def _scenario(args: argparse.Namespace, attack: str = "insider") -> ScenarioConfig:
    data: dict = {}
    if getattr(args, "config", None):
        data.update(json.loads(args.config.read_text()))
    data.setdefault("attack", attack)
    for dest, name in _FLAG_FIELDS.items():
        value = getattr(args, dest, None)
        if value is not None:
            data[name] = value
    if getattr(args, "kind", None):
        data["attack"] = args.kind
    return ScenarioConfig.from_mapping(data)


def _emit(text: str, out: Path | None) -> None:
    if out:
        out.write_text(text)
    else:
        sys.stdout.write(text)


def _system_document(cfg: ScenarioConfig) -> dict:
    params, _kgc, material = build_system(cfg)
    return {
        "kind": "system",
        "scheme": cfg.scheme,
        "params": serialize.params_to_dict(params),
        "nodes": [serialize.to_dict(m) for m in material],
    }


def cmd_setup(args) -> int:
    # setup has no attack; validate against one that fits the scheme
    cfg = _scenario(args)
    attack = "collude" if cfg.scheme == "albakri_harn" else "insider"
    cfg = replace(cfg, attack=attack, captured=()).validated()
    _emit(serialize.canonical_json(_system_document(cfg)), args.out)
    return 0


def cmd_key(args) -> int:
    if args.system:
        doc = json.loads(args.system.read_text())
    else:
        cfg = _scenario(args)
        attack = "collude" if cfg.scheme == "albakri_harn" else "insider"
        doc = _system_document(replace(cfg, attack=attack, captured=()).validated())
    params = serialize.params_from_dict(doc["params"])
    nodes = doc["nodes"]
    if not 1 <= args.node <= len(nodes):
        raise ConfigError("node", f"must lie in 1..{len(nodes)}")
    material = serialize.from_dict(nodes[args.node - 1])
    group = [int(v) for v in args.group.split(",") if v.strip()]
    if isinstance(material, ShareSet):
        key = hh_member_key(material, group)
    else:
        key = ah_member_key(material, group, params)
    _emit(serialize.dumps(key), args.out)
    return 0


def cmd_attack(args) -> int:
    report = run_scenario(_scenario(args, args.kind))
    _emit(report.to_json(), args.out)
    return 0 if report.verdict else 1


def cmd_sweep(args) -> int:
    raw = json.loads(args.config.read_text())
    items = raw["scenarios"] if isinstance(raw, dict) else raw
    configs = [ScenarioConfig.from_mapping(item) for item in items]
    reports = sweep(configs, args.parallelism)
    doc = {
        "reports": [r.to_dict() for r in reports],
        "verdict": all(r.verdict for r in reports),
    }
    _emit(serialize.canonical_json(doc), args.out)
    return 0 if doc["verdict"] else 1


def cmd_selftest(args) -> int:
    results = run_selftest()
    for name, want, got, ok in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}: expected {want!r}, got {got!r}")
    failed = sum(not ok for *_, ok in results)
    print(f"{len(results) - failed}/{len(results)} fixture values reproduced")
    return 1 if failed else 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handler = {
        "setup": cmd_setup,
        "key": cmd_key,
        "attack": cmd_attack,
        "sweep": cmd_sweep,
        "selftest": cmd_selftest,
    }[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
