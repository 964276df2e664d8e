"""Truncated norm-one quaternions over Z_p: the pro-p platform S(Delta_p).

Delta_p has basis 1, i, j, k with i^2 = t (a quadratic nonresidue mod p),
j^2 = p and k = ij = -ji.  Its maximal ideal is m = Delta_p j, so

    v_m(a + bi + cj + dk) = min(2 v(a), 2 v(b), 2 v(c) + 1, 2 v(d) + 1)

and m^{2s} = p^s Delta_p, m^{2s+1} = p^s m.  The group S is the set of
x = 1 mod m with conj(x) = x^-1, filtered by the layers 1 + m^k.
Everything is computed modulo p^N for a working precision N.
"""

from __future__ import annotations

import random
from collections.abc import Sequence
from dataclasses import dataclass
from itertools import product
from typing import NamedTuple, Optional, Union

from .errors import LevelTooLow, NotNormOne, RelationError, SamplingFailed
from .group import Group
from .numtheory import Residue, Valuation, find_qnr, hensel_sqrt, is_prime, vp_int


class Signs(NamedTuple):
    """Sign of each cross term in the product, read off from i^2 = t, j^2 = p, k = ij = -ji."""

    ii: int = 1  # i*i = t
    jj: int = 1  # j*j = p
    kk: int = -1  # k*k = -tp
    jk: int = -1  # j*k = -p i
    kj: int = 1  # k*j = p i
    ik: int = 1  # i*k = t j
    ki: int = -1  # k*i = -t j
    ij: int = 1  # i*j = k
    ji: int = -1  # j*i = -k


SIGN_TABLE = Signs()


@dataclass(frozen=True)
class Quaternion:
    a: int
    b: int
    c: int
    d: int

    def coords(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)


@dataclass(frozen=True)
class SL1Element:
    """Norm-one quaternion together with a certified m-valuation of q - 1."""

    q: Quaternion
    level: int


QuatLike = Union[Quaternion, SL1Element]


def _q(x: QuatLike) -> Quaternion:
    return x.q if isinstance(x, SL1Element) else x


def precision_for(n: int, alpha: int) -> int:
    """Working precision N that keeps m^{(n+1)(2 alpha - 1)} representable, plus two guard digits."""
    if n < 1 or alpha < 1:
        raise ValueError("n and alpha must be positive")
    top = (n + 1) * (2 * alpha - 1) + 1
    return -(-top // 2) + 2


@dataclass(frozen=True)
class QuatParams:
    p: int
    t: int
    N: int
    alpha: int
    n: int

    def __post_init__(self) -> None:
        p = self.p
        if p <= 3 or not is_prime(p):
            raise ValueError(f"quaternion platform needs a prime p > 3, got {p}")
        if pow(self.t % p, (p - 1) // 2, p) != p - 1:
            raise ValueError(f"t={self.t} is not a quadratic nonresidue modulo {p}")
        if self.alpha < 1 or self.n < 1:
            raise ValueError("alpha and n must be positive")
        if self.N < 1:
            raise ValueError(f"precision N must be positive, got {self.N}")

    @property
    def has_protocol_precision(self) -> bool:
        """N is large enough to host the class-n quotient with guard digits."""
        return self.N >= precision_for(self.n, self.alpha)

    @classmethod
    def create(
        cls, p: int, alpha: int, n: int, N: Optional[int] = None, t: Optional[int] = None
    ) -> QuatParams:
        if t is None:
            t = find_qnr(p).value
        if N is None:
            N = precision_for(n, alpha)
        return cls(p, t, N, alpha, n)

    @property
    def i0(self) -> int:
        """Base layer 2*alpha - 1; H = gamma_{i0}(S) is the protocol group."""
        return 2 * self.alpha - 1

    @property
    def modulus(self) -> int:
        return self.p**self.N

    @property
    def quotient_level(self) -> int:
        """Layer (n+1)*i0 defining the class-n quotient H / gamma_{n+1}(H)."""
        return (self.n + 1) * self.i0

    def to_config(self) -> str:
        return f"p={self.p}\nt={self.t}\nN={self.N}\nalpha={self.alpha}\nn={self.n}\n"

    @classmethod
    def from_config(cls, text: str) -> QuatParams:
        values = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, val = line.partition("=")
            values[key.strip()] = int(val.strip())
        return cls(values["p"], values["t"], values["N"], values["alpha"], values["n"])


ONE = Quaternion(1, 0, 0, 0)


def quat(P: QuatParams, a: int, b: int = 0, c: int = 0, d: int = 0) -> Quaternion:
    M = P.modulus
    return Quaternion(a % M, b % M, c % M, d % M)


def quat_mul(P: QuatParams, x: QuatLike, y: QuatLike) -> Quaternion:
    x, y = _q(x), _q(y)
    s = SIGN_TABLE
    p, t, M = P.p, P.t, P.modulus
    a1, b1, c1, d1 = x.a, x.b, x.c, x.d
    a2, b2, c2, d2 = y.a, y.b, y.c, y.d
    return Quaternion(
        (a1 * a2 + s.ii * t * b1 * b2 + s.jj * p * c1 * c2 + s.kk * t * p * d1 * d2) % M,
        (a1 * b2 + b1 * a2 + s.jk * p * c1 * d2 + s.kj * p * d1 * c2) % M,
        (a1 * c2 + c1 * a2 + s.ik * t * b1 * d2 + s.ki * t * d1 * b2) % M,
        (a1 * d2 + d1 * a2 + s.ij * b1 * c2 + s.ji * c1 * b2) % M,
    )


def conj(P: QuatParams, x: QuatLike) -> Quaternion:
    x = _q(x)
    M = P.modulus
    return Quaternion(x.a, -x.b % M, -x.c % M, -x.d % M)


def norm(P: QuatParams, x: QuatLike) -> Residue:
    x = _q(x)
    p, t = P.p, P.t
    return Residue(x.a**2 - t * x.b**2 - p * x.c**2 + t * p * x.d**2, P.modulus)


def sub_one(P: QuatParams, x: QuatLike) -> Quaternion:
    x = _q(x)
    return Quaternion((x.a - 1) % P.modulus, x.b, x.c, x.d)


def m_valuation(P: QuatParams, x: QuatLike) -> Valuation:
    x = _q(x)
    N = P.N
    if not any(x.coords()):
        return Valuation.infinite()
    p = P.p
    v = min(
        2 * vp_int(x.a, p, N),
        2 * vp_int(x.b, p, N),
        2 * vp_int(x.c, p, N) + 1,
        2 * vp_int(x.d, p, N) + 1,
    )
    cap = 2 * N - 1
    if v >= cap:
        return Valuation(cap, saturated=True)
    return Valuation(v)


def level_of(P: QuatParams, x: QuatLike) -> Valuation:
    """m-valuation of x - 1, i.e. the deepest layer 1 + m^k containing x."""
    return m_valuation(P, sub_one(P, x))


def layer_moduli(P: QuatParams, L: int) -> tuple[int, int, int, int]:
    """Coordinate moduli of m^L: p^ceil(L/2) on 1, i and p^ceil((L-1)/2) on j, k."""
    p, N = P.p, P.N
    even = min(-(-L // 2), N)
    odd = min(-(-(L - 1) // 2), N)
    return (p**even, p**even, p**odd, p**odd)


def reduce_mod_layer(P: QuatParams, x: QuatLike, L: int) -> Quaternion:
    """Canonical representative of x modulo the two-sided ideal m^L."""
    x = _q(x)
    ma, mb, mc, md = layer_moduli(P, L)
    return Quaternion(x.a % ma, x.b % mb, x.c % mc, x.d % md)


def s_element_from(P: QuatParams, b: int, c: int, d: int) -> Quaternion:
    """The norm-one element a + bi + cj + dk with a = 1 mod p."""
    p, t, M = P.p, P.t, P.modulus
    s = Residue(1 + t * b * b + p * c * c - t * p * d * d, M)
    a = hensel_sqrt(s, Residue(1, p))
    return quat(P, a.value, b, c, d)


def sample_s_element(
    P: QuatParams, k: int, rng: random.Random, max_retries: int = 64
) -> SL1Element:
    """Random element of S lying in 1 + m^k but not in 1 + m^{k+1}."""
    if not 1 <= k <= 2 * P.N - 3:
        raise ValueError(f"level {k} outside 1..{2 * P.N - 3}")
    p, N = P.p, P.N
    eb = min(-(-k // 2), N)  # v(b) >= k/2
    ecd = min(k // 2, N)  # v(c), v(d) >= (k-1)/2
    for _ in range(max_retries):
        b = p**eb * rng.randrange(p ** (N - eb))
        c = p**ecd * rng.randrange(p ** (N - ecd))
        d = p**ecd * rng.randrange(p ** (N - ecd))
        x = s_element_from(P, b, c, d)
        v = level_of(P, x)
        if v.finite and not v.saturated and v.order == k:
            return SL1Element(x, k)
    raise SamplingFailed(f"no element of exact level {k} after {max_retries} draws")


def quat_inv(P: QuatParams, x: QuatLike) -> SL1Element:
    q = _q(x)
    if norm(P, q).value != 1:
        raise NotNormOne("inverse by conjugation needs a norm-one element")
    level = x.level if isinstance(x, SL1Element) else 0
    return SL1Element(conj(P, q), level)


def equal_mod_layer(P: QuatParams, x: QuatLike, y: QuatLike, k: int) -> bool:
    """x and y agree modulo 1 + m^k, i.e. x y^-1 lies in 1 + m^k."""
    return level_of(P, quat_mul(P, x, conj(P, y))).at_least(k)


def pow_layer_formula(P: QuatParams, x: QuatLike, m: int, k: int) -> Quaternion:
    """x^m modulo m^{(k+1) i0} via the linear formula a^m + m(bi + cj + dk).

    Valid for x in gamma_k(H) = 1 + m^{k i0}.
    """
    q = _q(x)
    if not level_of(P, q).at_least(k * P.i0):
        raise LevelTooLow(f"element is not in layer {k * P.i0}")
    M = P.modulus
    a_m = pow(q.a, m, M)  # a is a unit, so negative m is fine
    y = Quaternion(a_m, m * q.b % M, m * q.c % M, m * q.d % M)
    return reduce_mod_layer(P, y, (k + 1) * P.i0)


def check_relations(P: QuatParams) -> None:
    """Verify i^2 = t, j^2 = p, ij = k, ji = -k and associativity on basis triples."""
    M = P.modulus
    one, i, j, k = (quat(P, *e) for e in ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)))
    checks = {
        "i^2 = t": (quat_mul(P, i, i), quat(P, P.t)),
        "j^2 = p": (quat_mul(P, j, j), quat(P, P.p)),
        "ij = k": (quat_mul(P, i, j), k),
        "ji = -k": (quat_mul(P, j, i), quat(P, 0, 0, 0, M - 1)),
    }
    for name, (got, want) in checks.items():
        if got != want:
            raise RelationError(f"quaternion relation {name} fails: got {got}")
    basis = (one, i, j, k)
    for x, y, z in product(basis, repeat=3):
        if quat_mul(P, quat_mul(P, x, y), z) != quat_mul(P, x, quat_mul(P, y, z)):
            raise RelationError(f"quaternion product not associative on ({x}, {y}, {z})")


class QuaternionGroup(Group):
    """S(Delta_p) mod p^N, optionally as the quotient by the layer ``level``.

    With ``level=L`` two elements are equal when they agree modulo 1 + m^L;
    the protocol uses L = (n+1) i0, which realises H / gamma_{n+1}(H).
    """

    family = "quaternion"

    def __init__(self, params: QuatParams, level: Optional[int] = None):
        check_relations(params)
        self.params = params
        self.p = params.p
        if level is not None and not 1 <= level <= 2 * params.N - 1:
            raise ValueError(f"quotient level {level} outside 1..{2 * params.N - 1}")
        self.level = level

    def __repr__(self) -> str:
        return f"QuaternionGroup({self.params}, level={self.level})"

    def identity(self) -> Quaternion:
        return ONE

    def mul(self, x: Quaternion, y: Quaternion) -> Quaternion:
        return quat_mul(self.params, x, y)

    def inv(self, x: Quaternion) -> Quaternion:
        return conj(self.params, x)

    def reduce(self, x: Quaternion) -> Quaternion:
        if self.level is None:
            return x
        return reduce_mod_layer(self.params, x, self.level)

    def random_element(self, rng: random.Random) -> Quaternion:
        return sample_s_element(self.params, self.params.i0, rng).q

    def coordinates(self, x: Quaternion) -> tuple[int, ...]:
        return x.coords()

    def from_coordinates(self, coords: Sequence[int]) -> Quaternion:
        if len(coords) != 4:
            raise ValueError(f"expected 4 coordinates, got {len(coords)}")
        return quat(self.params, *coords)

    @property
    def coordinate_modulus(self) -> int:
        return self.params.modulus
