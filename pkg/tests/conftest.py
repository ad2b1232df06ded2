import random

import pytest

from gkpbreak.modmath import Modulus, Residue, gen_modulus
from gkpbreak.schemes import ah_setup, hg_setup, hh_setup, make_params

Z77 = Modulus(7, 11)


def r77(v: int) -> Residue:
    return Residue(v, 77)


def build(scheme: str, ell: int, degree: int, seed: int, bits: int = 32):
    """(params, kgc, material) for one seeded instance, independent of the harness."""
    root_degree = ell - 1 if scheme == "hg" and ell > 2 else None
    modulus = gen_modulus(bits, seed, root_degree=root_degree)
    rng = random.Random(seed * 7919 + ell * 101 + degree)
    params = make_params(ell, degree, modulus, rng)
    setup = {"hh": hh_setup, "hg": hg_setup, "ah": ah_setup}[scheme]
    kgc, material = setup(params, rng)
    return params, kgc, material


@pytest.fixture
def z77():
    return Z77


_CRITERIA: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion; the verdict is printed in the terminal summary."""
    name = request.node.get_closest_marker("criterion").args[0]
    _CRITERIA[name] = (False, "did not finish")

    def done(detail: str):
        _CRITERIA[name] = (True, detail)

    yield done


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion label")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name, (ok, detail) in sorted(_CRITERIA.items(), key=lambda kv: int(kv[0].split()[0])):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  ({detail})")
