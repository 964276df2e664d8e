"""Extraspecial group Heis_{2m+1}(F_p) of exponent p.

Ground set F_p^m x F_p^m x F_p with

    (u, v, z)(u', v', z') = (u + u', v + v', z + z' + u.v')

It has class 2, centre = derived subgroup = {(0, 0, z)}, and exponent p.
"""

from __future__ import annotations

import random
from collections.abc import Sequence
from dataclasses import dataclass

from .group import Group
from .numtheory import binom2, is_prime


@dataclass(frozen=True)
class HeisElement:
    u: tuple[int, ...]
    v: tuple[int, ...]
    z: int


def _dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


class HeisenbergGroup(Group):
    family = "heisenberg"

    def __init__(self, p: int, m: int = 1):
        if p == 2 or not is_prime(p):
            raise ValueError(f"Heisenberg platform needs an odd prime p, got {p}")
        if m < 1:
            raise ValueError(f"m must be positive, got {m}")
        self.p = p
        self.m = m

    def __repr__(self) -> str:
        return f"HeisenbergGroup(p={self.p}, m={self.m})"

    def element(self, u: Sequence[int], v: Sequence[int], z: int) -> HeisElement:
        p = self.p
        if len(u) != self.m or len(v) != self.m:
            raise ValueError(f"u and v must have length {self.m}")
        return HeisElement(tuple(a % p for a in u), tuple(b % p for b in v), z % p)

    def identity(self) -> HeisElement:
        zero = (0,) * self.m
        return HeisElement(zero, zero, 0)

    def mul(self, x: HeisElement, y: HeisElement) -> HeisElement:
        p = self.p
        return HeisElement(
            tuple((a + b) % p for a, b in zip(x.u, y.u)),
            tuple((a + b) % p for a, b in zip(x.v, y.v)),
            (x.z + y.z + _dot(x.u, y.v)) % p,
        )

    def inv(self, x: HeisElement) -> HeisElement:
        p = self.p
        return HeisElement(
            tuple(-a % p for a in x.u),
            tuple(-b % p for b in x.v),
            (-x.z + _dot(x.u, x.v)) % p,
        )

    def pow_closed_form(self, x: HeisElement, a: int) -> HeisElement:
        # a*z + C(a, 2) u.v; the (a+1 choose 2)*z variant disagrees with the group law
        p = self.p
        return HeisElement(
            tuple(a * c % p for c in x.u),
            tuple(a * c % p for c in x.v),
            (a * x.z + binom2(a) * _dot(x.u, x.v)) % p,
        )

    def commutator_closed_form(self, x: HeisElement, y: HeisElement) -> HeisElement:
        zero = (0,) * self.m
        return HeisElement(zero, zero, (_dot(x.u, y.v) - _dot(y.u, x.v)) % self.p)

    def is_central(self, x: HeisElement) -> bool:
        return not any(x.u) and not any(x.v)

    def standard_generators(self) -> list[HeisElement]:
        """The 2m elements (e_k, 0, 0) and (0, e_k, 0)."""
        zero = [0] * self.m
        gens = []
        for k in range(self.m):
            e = list(zero)
            e[k] = 1
            gens.append(self.element(e, zero, 0))
        for k in range(self.m):
            e = list(zero)
            e[k] = 1
            gens.append(self.element(zero, e, 0))
        return gens

    def random_element(self, rng: random.Random) -> HeisElement:
        p, m = self.p, self.m
        return HeisElement(
            tuple(rng.randrange(p) for _ in range(m)),
            tuple(rng.randrange(p) for _ in range(m)),
            rng.randrange(p),
        )

    def coordinates(self, x: HeisElement) -> tuple[int, ...]:
        return (*x.u, *x.v, x.z)

    def from_coordinates(self, coords: Sequence[int]) -> HeisElement:
        m = self.m
        if len(coords) != 2 * m + 1:
            raise ValueError(f"expected {2 * m + 1} coordinates, got {len(coords)}")
        return self.element(coords[:m], coords[m : 2 * m], coords[2 * m])

    @property
    def coordinate_modulus(self) -> int:
        return self.p
