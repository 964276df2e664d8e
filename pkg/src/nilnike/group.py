"""Platform-agnostic group contract and commutator calculus.

A platform is a :class:`Group` object; its elements are immutable values
that carry no reference to the group.  Every routine here takes the group
explicitly, which lets attacks wrap a platform in :class:`CountingGroup` and
count multiplications per instance.

Conventions: ``[x, y] = x y x^-1 y^-1`` and nested commutators are
right-normed, ``[x1, x2, ..., xn] = [x1, [x2, [..., [x_{n-1}, x_n]]]]``.
"""

from __future__ import annotations

import random
from abc import ABC, abstractmethod
from collections.abc import Sequence
from typing import Any

from .errors import CapExceeded, TooLarge, TooShort

Element = Any

PLATFORM_TAGS = {"heisenberg": 1, "cyclic-triple": 2, "quaternion": 3}


class Group(ABC):
    """Contract every platform implements."""

    family: str
    p: int

    @abstractmethod
    def identity(self) -> Element: ...

    @abstractmethod
    def mul(self, x: Element, y: Element) -> Element: ...

    @abstractmethod
    def inv(self, x: Element) -> Element: ...

    @abstractmethod
    def coordinates(self, x: Element) -> tuple[int, ...]:
        """Flat coordinate tuple used for serialization."""

    @abstractmethod
    def from_coordinates(self, coords: Sequence[int]) -> Element: ...

    @abstractmethod
    def random_element(self, rng: random.Random) -> Element: ...

    @property
    @abstractmethod
    def coordinate_modulus(self) -> int:
        """Modulus bounding every coordinate (fixes the encoding width)."""

    def reduce(self, x: Element) -> Element:
        """Canonical representative; platforms that are quotients override this."""
        return x

    @property
    def width(self) -> int:
        return max(1, ((self.coordinate_modulus - 1).bit_length() + 7) // 8)

    def encode(self, x: Element) -> bytes:
        """Tag byte followed by fixed-width big-endian coordinates."""
        w = self.width
        out = bytearray([PLATFORM_TAGS[self.family]])
        for c in self.coordinates(x):
            out += c.to_bytes(w, "big")
        return bytes(out)

    def decode(self, data: bytes) -> Element:
        if not data or data[0] != PLATFORM_TAGS[self.family]:
            raise ValueError(f"not a {self.family} element encoding")
        w = self.width
        body = data[1:]
        if len(body) % w:
            raise ValueError("truncated element encoding")
        coords = [int.from_bytes(body[i : i + w], "big") for i in range(0, len(body), w)]
        return self.from_coordinates(coords)

    def key(self, x: Element) -> bytes:
        """Canonical bytes: equal exactly when the elements are equal in the group."""
        return self.encode(self.reduce(x))

    def eq(self, x: Element, y: Element) -> bool:
        return self.key(x) == self.key(y)

    def is_identity(self, x: Element) -> bool:
        return self.eq(x, self.identity())


class CountingGroup(Group):
    """Delegating wrapper that counts multiplications (inversions count as one)."""

    def __init__(self, inner: Group):
        self.inner = inner
        self.family = inner.family
        self.p = inner.p
        self.ops = 0

    def identity(self):
        return self.inner.identity()

    def mul(self, x, y):
        self.ops += 1
        return self.inner.mul(x, y)

    def inv(self, x):
        self.ops += 1
        return self.inner.inv(x)

    def coordinates(self, x):
        return self.inner.coordinates(x)

    def from_coordinates(self, coords):
        return self.inner.from_coordinates(coords)

    def random_element(self, rng):
        return self.inner.random_element(rng)

    @property
    def coordinate_modulus(self):
        return self.inner.coordinate_modulus

    def reduce(self, x):
        return self.inner.reduce(x)

    def __getattr__(self, name):
        # platform-specific extras (params, closed forms) pass straight through
        if name == "inner":
            raise AttributeError(name)
        return getattr(self.inner, name)


def power(G: Group, x: Element, e: int) -> Element:
    """x**e by left-to-right square-and-multiply; negative e inverts first."""
    if e == 0:
        return G.identity()
    if e < 0:
        x = G.inv(x)
        e = -e
    result = x
    for bit in bin(e)[3:]:
        result = G.mul(result, result)
        if bit == "1":
            result = G.mul(result, x)
    return result


def commutator(G: Group, x: Element, y: Element) -> Element:
    # (xy)(yx)^-1 is x y x^-1 y^-1 using four group operations instead of five
    return G.mul(G.mul(x, y), G.inv(G.mul(y, x)))


def nested_commutator(G: Group, xs: Sequence[Element]) -> Element:
    if len(xs) < 2:
        raise TooShort(f"nested commutator needs at least 2 entries, got {len(xs)}")
    acc = xs[-1]
    for x in reversed(xs[:-1]):
        acc = commutator(G, x, acc)
    return acc


def weight_commutator(G: Group, xs: Sequence[Element]) -> Element:
    """Nested commutator that also accepts a single entry (weight 1 is the entry itself)."""
    if len(xs) == 1:
        return xs[0]
    return nested_commutator(G, xs)


def order_p_power(G: Group, x: Element, p: int, cap: int) -> int:
    """Smallest a <= cap with x**(p**a) trivial."""
    y = x
    for a in range(cap + 1):
        if G.is_identity(y):
            return a
        y = power(G, y, p)
    raise CapExceeded(f"element order exceeds {p}^{cap}")


def cyclic_subgroup(G: Group, g: Element, bound: int = 10**5) -> list[Element]:
    """All powers g^0, g^1, ... up to the order of g."""
    elems = [G.identity()]
    cur = g
    while not G.is_identity(cur):
        elems.append(cur)
        if len(elems) > bound:
            raise TooLarge(f"<g> has more than {bound} elements")
        cur = G.mul(cur, g)
    return elems


def brute_force_slot_kernel(
    G: Group, gens: Sequence[Element], slot: int, bound: int = 10**5
) -> int:
    """Index of the slot kernel K_i in <g_i>, found by exhaustive search.

    ``slot`` is 1-based.  K_i collects the powers h of g_i for which the nested
    commutator with g_i replaced by h is trivial.  The other slots stay at
    their generators; by multilinearity that is the same as ranging over
    their whole cyclic subgroups.
    """
    if not 1 <= slot <= len(gens):
        raise IndexError(f"slot {slot} out of range 1..{len(gens)}")
    elems = cyclic_subgroup(G, gens[slot - 1], bound)
    kernel = 0
    for h in elems:
        xs = list(gens)
        xs[slot - 1] = h
        if G.is_identity(weight_commutator(G, xs)):
            kernel += 1
    return len(elems) // kernel
