"""Residue arithmetic in Z/mZ and truncated factorial towers.

Python ints throughout, so moduli like 25! are exact.
"""

from dataclasses import dataclass
from math import factorial

from spiraltower.errors import InvalidModulus, NotDivisor


@dataclass(frozen=True, order=True)
class Residue:
    modulus: int
    value: int

    def __post_init__(self):
        if self.modulus < 1:
            raise InvalidModulus(self.modulus)
        if not 0 <= self.value < self.modulus:
            raise ValueError(f"value {self.value} is not reduced mod {self.modulus}")

    def __add__(self, other):
        if isinstance(other, Residue):
            if other.modulus != self.modulus:
                raise ValueError("moduli differ")
            other = other.value
        return Residue(self.modulus, (self.value + other) % self.modulus)

    def __str__(self):
        return f"{self.value} mod {self.modulus}"


def residue(m, x):
    if m < 1:
        raise InvalidModulus(m)
    return Residue(m, x % m)


def translate(r):
    """The odometer step t -> t + 1."""
    return Residue(r.modulus, (r.value + 1) % r.modulus)


def project(r, m):
    if m < 1:
        raise InvalidModulus(m)
    if r.modulus % m:
        raise NotDivisor(m, r.modulus)
    return Residue(m, r.value % m)


@dataclass(frozen=True)
class FactorialTower:
    """Compatible residues of one point modulo 1!, 2!, ..., depth!."""

    levels: tuple

    def __post_init__(self):
        for i, r in enumerate(self.levels, start=1):
            if r.modulus != factorial(i):
                raise ValueError(f"level {i} has modulus {r.modulus}, expected {i}!")
        for lo, hi in zip(self.levels, self.levels[1:]):
            if project(hi, lo.modulus) != lo:
                raise ValueError("tower levels are not compatible")

    @property
    def depth(self):
        return len(self.levels)

    def translate(self):
        return FactorialTower(tuple(translate(r) for r in self.levels))

    def render(self):
        return ", ".join(f"{r.value}/{i}!" for i, r in enumerate(self.levels, start=1))

    def __str__(self):
        return self.render()


def tower_of(x, depth):
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    return FactorialTower(tuple(residue(factorial(i), x) for i in range(1, depth + 1)))
