"""Modular and truncated p-adic integer arithmetic.

Every residue carries its modulus, which is always a prime power ``p**N``
here.  Integers are Python ints, so nothing overflows.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from sympy import isprime

from .errors import BadBranch, NonUnit, NotASquare


@dataclass(frozen=True)
class Residue:
    value: int
    modulus: int

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise ValueError(f"modulus must be positive, got {self.modulus}")
        object.__setattr__(self, "value", self.value % self.modulus)

    def __int__(self) -> int:
        return self.value


@dataclass(frozen=True)
class Valuation:
    """p-adic (or m-adic) valuation.

    ``finite=False`` encodes the valuation of zero.  ``saturated=True`` means
    the true value is at least ``order`` but precision ran out before it
    could be pinned down.
    """

    order: int = 0
    finite: bool = True
    saturated: bool = False

    @classmethod
    def infinite(cls) -> Valuation:
        return cls(0, finite=False)

    def at_least(self, k: int) -> bool:
        if not self.finite:
            return True
        if self.saturated:
            # order is only a lower bound
            return k <= self.order
        return self.order >= k

    def __str__(self) -> str:
        if not self.finite:
            return "inf"
        return f">={self.order}" if self.saturated else str(self.order)


def is_prime(n: int) -> bool:
    """Probabilistic primality test for configuration checks."""
    return bool(isprime(n))


def mod_pow(base: Residue, exp: int) -> Residue:
    if exp < 0:
        raise ValueError("exponent must be nonnegative; use mod_inv first")
    # builtin three-argument pow is square-and-multiply
    return Residue(pow(base.value, exp, base.modulus), base.modulus)


def mod_inv(x: Residue) -> Residue:
    if gcd(x.value, x.modulus) != 1:
        raise NonUnit(f"{x.value} is not a unit modulo {x.modulus}")
    return Residue(pow(x.value, -1, x.modulus), x.modulus)


def v_p(x: int, p: int) -> Valuation:
    """Largest e with p**e dividing x."""
    if x == 0:
        return Valuation.infinite()
    x = abs(x)
    e = 0
    while x % p == 0:
        x //= p
        e += 1
    return Valuation(e)


def vp_int(x: int, p: int, cap: int) -> int:
    """v_p(x) as a plain int, clamped to ``cap`` (used for x = 0 mod p**cap)."""
    if x == 0:
        return cap
    e = 0
    while e < cap and x % p == 0:
        x //= p
        e += 1
    return e


def find_qnr(p: int) -> Residue:
    """Smallest positive quadratic nonresidue modulo the odd prime p."""
    if p < 3 or p % 2 == 0:
        raise ValueError(f"p must be an odd prime, got {p}")
    half = (p - 1) // 2
    for t in range(2, p):
        if pow(t, half, p) == p - 1:
            return Residue(t, p)
    raise ValueError(f"no quadratic nonresidue modulo {p}; is it prime?")


def hensel_sqrt(s: Residue, branch: Residue) -> Residue:
    """Square root of ``s`` modulo p**N congruent to ``branch`` modulo p.

    ``branch.modulus`` is the prime p; ``s.modulus`` must be a power of it.
    """
    p = branch.modulus
    pn = s.modulus
    if p == 2:
        raise ValueError("Hensel lifting of square roots needs odd p")
    s0 = s.value % p
    if s0 != 0 and pow(s0, (p - 1) // 2, p) != 1:
        raise NotASquare(f"{s.value} is not a square modulo {p}")
    b = branch.value % p
    if b == 0 or (b * b - s0) % p != 0:
        raise BadBranch(f"{b}^2 is not congruent to {s.value} modulo {p}")
    a = b
    prec = p
    while prec < pn:
        prec = min(prec * prec, pn)
        # Newton step a <- a - (a^2 - s) / (2a), exact modulo the doubled precision
        a = (a - (a * a - s.value) * pow(2 * a, -1, prec)) % prec
    return Residue(a, pn)


def binom2(a: int) -> int:
    return a * (a - 1) // 2
