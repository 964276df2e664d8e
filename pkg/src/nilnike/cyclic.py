"""Class-2 group on C x C x C with C = Z/(p^alpha).

The product is (x, y, z)(x', y', z') = (x + x', y + y', z + z' + e(x, y'))
with the pairing e realised as residue multiplication.  That pairing is
bilinear and non-degenerate but not alternating; the commutator pairing it
induces, xy' - x'y, is alternating, and that is all the protocol uses.
"""

from __future__ import annotations

import random
from collections.abc import Sequence
from dataclasses import dataclass

from .group import Group
from .numtheory import binom2, is_prime


@dataclass(frozen=True)
class CyclicTripleElement:
    x: int
    y: int
    z: int


class CyclicTripleGroup(Group):
    family = "cyclic-triple"

    def __init__(self, p: int, alpha: int = 1):
        if p == 2 or not is_prime(p):
            raise ValueError(f"cyclic-triple platform needs an odd prime p, got {p}")
        if alpha < 1:
            raise ValueError(f"alpha must be positive, got {alpha}")
        self.p = p
        self.alpha = alpha
        self.q = p**alpha

    def __repr__(self) -> str:
        return f"CyclicTripleGroup(p={self.p}, alpha={self.alpha})"

    def element(self, x: int, y: int, z: int) -> CyclicTripleElement:
        q = self.q
        return CyclicTripleElement(x % q, y % q, z % q)

    def pairing(self, x: int, y: int) -> int:
        return x * y % self.q

    def identity(self) -> CyclicTripleElement:
        return CyclicTripleElement(0, 0, 0)

    def mul(self, a: CyclicTripleElement, b: CyclicTripleElement) -> CyclicTripleElement:
        q = self.q
        return CyclicTripleElement(
            (a.x + b.x) % q, (a.y + b.y) % q, (a.z + b.z + a.x * b.y) % q
        )

    def inv(self, a: CyclicTripleElement) -> CyclicTripleElement:
        q = self.q
        return CyclicTripleElement(-a.x % q, -a.y % q, (-a.z + a.x * a.y) % q)

    def pow_closed_form(self, a: CyclicTripleElement, e: int) -> CyclicTripleElement:
        q = self.q
        return CyclicTripleElement(
            e * a.x % q, e * a.y % q, (e * a.z + binom2(e) * a.x * a.y) % q
        )

    def commutator_closed_form(
        self, a: CyclicTripleElement, b: CyclicTripleElement
    ) -> CyclicTripleElement:
        return CyclicTripleElement(0, 0, (a.x * b.y - b.x * a.y) % self.q)

    def is_central(self, a: CyclicTripleElement) -> bool:
        return a.x == 0 and a.y == 0

    def random_element(self, rng: random.Random) -> CyclicTripleElement:
        q = self.q
        return CyclicTripleElement(rng.randrange(q), rng.randrange(q), rng.randrange(q))

    def coordinates(self, a: CyclicTripleElement) -> tuple[int, ...]:
        return (a.x, a.y, a.z)

    def from_coordinates(self, coords: Sequence[int]) -> CyclicTripleElement:
        if len(coords) != 3:
            raise ValueError(f"expected 3 coordinates, got {len(coords)}")
        return self.element(*coords)

    @property
    def coordinate_modulus(self) -> int:
        return self.q
