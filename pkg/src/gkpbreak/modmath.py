"""Modular arithmetic over an RSA-style modulus N = p*q.

Everything a node or an attacker does needs only N.  Operations that use the
factorization (prime generation, n-th roots) belong to the key generation
centre and take a :class:`Modulus`, which is the only object holding p and q.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import gcd
from typing import Union

from sympy.ntheory.residue_ntheory import nthroot_mod

from .errors import ModulusMismatch, NoRoot, NotInvertible

MR_ROUNDS = 40
DEFAULT_PRIME_BITS = 32

_SMALL_PRIMES = (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)


@dataclass(frozen=True)
class Modulus:
    """KGC view of the ring: the two primes and the derived N and phi(N)."""

    p: int = field(repr=False)
    q: int = field(repr=False)
    n: int = field(init=False)
    phi: int = field(init=False, repr=False)

    def __post_init__(self):
        if self.p == self.q:
            raise ValueError("p and q must be distinct")
        object.__setattr__(self, "n", self.p * self.q)
        object.__setattr__(self, "phi", (self.p - 1) * (self.q - 1))

    def residue(self, value: int) -> "Residue":
        return Residue(value, self.n)


@dataclass(frozen=True, slots=True)
class Residue:
    """An element of Z_N, always stored in canonical form 0 <= value < N.

    Plain ints are coerced into the ring; mixing residues of two different
    moduli raises :class:`ModulusMismatch`.
    """

    value: int
    modulus: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.modulus)

    def _coerce(self, other) -> int:
        if isinstance(other, Residue):
            if other.modulus != self.modulus:
                raise ModulusMismatch(f"residues mod {self.modulus} and mod {other.modulus}")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def _wrap(self, value: int) -> "Residue":
        return Residue(value, self.modulus)

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return self._wrap(self.value + v)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return self._wrap(self.value - v)

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return self._wrap(v - self.value)

    def __neg__(self):
        return self._wrap(-self.value)

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return self._wrap(self.value * v)

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return self * mod_inverse(self._wrap(v))

    def __rtruediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return mod_inverse(self) * v

    def __pow__(self, exponent: int):
        if exponent < 0:
            return mod_inverse(self) ** -exponent
        return self._wrap(pow(self.value, exponent, self.modulus))

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return str(self.value)


ModulusLike = Union[Modulus, int]


def _n_of(modulus: ModulusLike) -> int:
    return modulus.n if isinstance(modulus, Modulus) else modulus


def is_probable_prime(n: int, rng: random.Random, rounds: int = MR_ROUNDS) -> bool:
    """Miller-Rabin with bases drawn from ``rng``; error below 4**-rounds."""
    if n < 2:
        return False
    if n in (2, 3):
        return True
    if n % 2 == 0:
        return False
    for sp in _SMALL_PRIMES:
        if n == sp:
            return True
        if n % sp == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for _ in range(rounds):
        a = rng.randrange(2, n - 1)
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _root_friendly(p: int, root_degree: int) -> bool:
    # keep gcd(root_degree, p - 1) as small as parity allows
    return gcd(root_degree, p - 1) == gcd(root_degree, 2)


def gen_prime(bit_length: int, rng: random.Random, root_degree: int | None = None) -> int:
    while True:
        cand = rng.getrandbits(bit_length) | (1 << (bit_length - 1)) | 1
        if root_degree and not _root_friendly(cand, root_degree):
            continue
        if is_probable_prime(cand, rng):
            return cand


def gen_modulus(bit_length: int = DEFAULT_PRIME_BITS, seed: int = 0, root_degree: int | None = None) -> Modulus:
    """Generate N = p*q with two distinct ``bit_length``-bit primes.

    The result is a pure function of ``(bit_length, seed, root_degree)``.
    When ``root_degree`` is given, primes with ``gcd(root_degree, p-1) >
    gcd(root_degree, 2)`` are skipped so that random residues are
    ``root_degree``-th powers often enough for Harn-Gong setup.
    """
    if bit_length < 8:
        raise ValueError("bit_length must be at least 8")
    rng = random.Random(seed)
    p = gen_prime(bit_length, rng, root_degree)
    while True:
        q = gen_prime(bit_length, rng, root_degree)
        if q != p:
            return Modulus(p, q)


def mod_inverse(a: Residue) -> Residue:
    if gcd(a.value, a.modulus) != 1:
        raise NotInvertible(a.value, a.modulus)
    return Residue(pow(a.value, -1, a.modulus), a.modulus)


def is_unit(a: Residue) -> bool:
    return gcd(a.value, a.modulus) == 1


def draw_unit(n: int, rng: random.Random) -> tuple[int, int]:
    """Return ``(unit, rejected)``: a uniform unit in [1, n) and how many non-units were skipped."""
    rejected = 0
    while True:
        v = rng.randrange(1, n)
        if gcd(v, n) == 1:
            return v, rejected
        rejected += 1


def random_unit(modulus: ModulusLike, rng: random.Random) -> Residue:
    n = _n_of(modulus)
    return Residue(draw_unit(n, rng)[0], n)


def random_residue(modulus: ModulusLike, rng: random.Random) -> Residue:
    n = _n_of(modulus)
    return Residue(rng.randrange(n), n)


def _is_power_mod_prime(a: int, e: int, p: int) -> bool:
    # Euler's criterion: a unit is an e-th power iff a**((p-1)/g) == 1
    return pow(a, (p - 1) // gcd(e, p - 1), p) == 1


def is_nth_power(a: Residue, n: int, modulus: Modulus) -> bool:
    """Whether the unit ``a`` has an n-th root mod N.  Needs the factorization."""
    return _is_power_mod_prime(a.value, n, modulus.p) and _is_power_mod_prime(a.value, n, modulus.q)


def _root_mod_prime(a: int, e: int, p: int) -> int:
    a %= p
    if gcd(e, p - 1) == 1:
        return pow(a, pow(e, -1, p - 1), p)
    r = nthroot_mod(a, e, p) if _is_power_mod_prime(a, e, p) else None
    if r is None:
        raise NoRoot(f"{a} has no {e}-th root modulo a prime factor")
    return r


def crt_pair(rp: int, p: int, rq: int, q: int) -> int:
    """The unique x mod p*q with x = rp (mod p) and x = rq (mod q)."""
    return rp + p * ((rq - rp) * pow(p, -1, q) % q)


def nth_root(a: Residue, n: int, modulus: Modulus) -> Residue:
    """Some u with u**n == a (mod N).  Needs the factorization.

    Uses the inverse exponent when gcd(n, phi) = 1; otherwise takes a root
    modulo each prime and recombines them.  Raises :class:`NoRoot` when ``a``
    is not an n-th power.
    """
    if a.modulus != modulus.n:
        raise ModulusMismatch(f"residue mod {a.modulus} with modulus {modulus.n}")
    if n < 1:
        raise ValueError("n must be positive")
    if not is_unit(a):
        raise NotInvertible(a.value, a.modulus)
    if n == 1:
        return a
    if gcd(n, modulus.phi) == 1:
        return Residue(pow(a.value, pow(n, -1, modulus.phi), modulus.n), modulus.n)
    rp = _root_mod_prime(a.value, n, modulus.p)
    rq = _root_mod_prime(a.value, n, modulus.q)
    return Residue(crt_pair(rp, modulus.p, rq, modulus.q), modulus.n)
