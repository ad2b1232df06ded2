"""Univariate polynomials over Z_N and dense multivariate tokens."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Mapping, Sequence

from .errors import ExpansionTooLarge, MissingAssignment, ModulusMismatch
from .modmath import Residue

DEFAULT_EXPANSION_CAP = 10**6

ExponentVector = tuple[int, ...]


@dataclass(frozen=True)
class UniPoly:
    """Coefficient vector over Z_N; ``coeffs[j]`` multiplies x**j."""

    coeffs: tuple[Residue, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a polynomial needs at least one coefficient")
        n = self.coeffs[0].modulus
        if any(c.modulus != n for c in self.coeffs):
            raise ModulusMismatch("polynomial coefficients span several moduli")

    @classmethod
    def from_ints(cls, values: Sequence[int], modulus: int) -> "UniPoly":
        return cls(tuple(Residue(v, modulus) for v in values))

    @property
    def modulus(self) -> int:
        return self.coeffs[0].modulus

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def constant(self) -> Residue:
        return self.coeffs[0]

    def __call__(self, x) -> Residue:
        return eval_uni(self, x)

    def ints(self) -> list[int]:
        return [c.value for c in self.coeffs]


def eval_uni(poly: UniPoly, x: Residue | int) -> Residue:
    n = poly.modulus
    if isinstance(x, Residue):
        if x.modulus != n:
            raise ModulusMismatch(f"point mod {x.modulus}, polynomial mod {n}")
        x = x.value
    acc = 0
    for c in reversed(poly.coeffs):
        acc = (acc * x + c.value) % n
    return Residue(acc, n)


def scale_poly(poly: UniPoly, u: Residue) -> UniPoly:
    return UniPoly(tuple(c * u for c in poly.coeffs))


@dataclass(frozen=True)
class ExpandedToken:
    """A node's token as a dense map from exponent vectors to coefficients.

    Variables are the foreign node indices in ascending order; position ``m``
    of every exponent vector is the power of ``x_{variable_indices[m]}``.
    """

    owner_index: int
    variable_indices: tuple[int, ...]
    degree_bound: int
    coefficients: Mapping[ExponentVector, Residue]

    def __post_init__(self):
        if list(self.variable_indices) != sorted(set(self.variable_indices)):
            raise ValueError("variable indices must be strictly ascending")
        if self.owner_index in self.variable_indices:
            raise ValueError("owner cannot be one of the token variables")
        width = len(self.variable_indices)
        expected = (self.degree_bound + 1) ** width
        if len(self.coefficients) != expected:
            raise ValueError(f"dense token needs {expected} entries, got {len(self.coefficients)}")
        for e in self.coefficients:
            if len(e) != width or any(k < 0 or k > self.degree_bound for k in e):
                raise ValueError(f"bad exponent vector {e}")

    @property
    def modulus(self) -> int:
        return next(iter(self.coefficients.values())).modulus

    def position(self, index: int) -> int:
        return self.variable_indices.index(index)

    def coeff(self, exponents: ExponentVector) -> Residue:
        return self.coefficients[tuple(exponents)]


def expand_token(
    scalar: Residue,
    foreign_polys: Sequence[tuple[int, UniPoly]],
    owner_index: int = 0,
    cap: int = DEFAULT_EXPANSION_CAP,
) -> ExpandedToken:
    """Multiply out ``scalar * prod_j f_j(x_j)`` into a dense coefficient map."""
    ordered = sorted(foreign_polys, key=lambda item: item[0])
    degrees = {poly.degree for _, poly in ordered}
    if len(degrees) > 1:
        raise ValueError("foreign polynomials must share one degree")
    degree = degrees.pop() if degrees else 0
    size = (degree + 1) ** len(ordered)
    if size > cap:
        raise ExpansionTooLarge(f"{size} token entries exceeds cap {cap}")

    coeffs: dict[ExponentVector, Residue] = {}
    for exps in product(range(degree + 1), repeat=len(ordered)):
        c = scalar
        for (_, poly), k in zip(ordered, exps):
            c = c * poly.coeffs[k]
        coeffs[exps] = c
    return ExpandedToken(
        owner_index=owner_index,
        variable_indices=tuple(idx for idx, _ in ordered),
        degree_bound=degree,
        coefficients=coeffs,
    )


def eval_token(token: ExpandedToken, assignment: Mapping[int, Residue | int]) -> Residue:
    n = token.modulus
    points = []
    for idx in token.variable_indices:
        if idx not in assignment:
            raise MissingAssignment(idx)
        x = assignment[idx]
        points.append(x.value if isinstance(x, Residue) else x % n)
    powers = [[pow(x, k, n) for k in range(token.degree_bound + 1)] for x in points]

    total = 0
    for exps, c in token.coefficients.items():
        term = c.value
        for pw, k in zip(powers, exps):
            term = term * pw[k] % n
        total += term
    return Residue(total, n)
