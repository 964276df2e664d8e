"""Nested-commutator key exchange between n + 1 users over a class-n group.

Public generators g_1..g_n; user j holds a secret a_j and publishes g_i^{a_j}
for every i.  The shared key is [g_1, ..., g_n]^{a_1 ... a_{n+1}}, which each
user evaluates from the public shares by multilinearity of the commutator map.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from math import gcd, prod
from typing import Iterable, Optional, Sequence

from .errors import (
    ClassUnsupported,
    ConfigError,
    DegenerateGenerators,
    MissingShare,
    NilnikeError,
    SubsetTooSmall,
)
from .group import Element, Group, order_p_power, power, weight_commutator
from .platforms import PlatformDescriptor
from .quaternion import sample_s_element


@dataclass(frozen=True)
class ProtocolParams:
    descriptor: PlatformDescriptor
    group: Group
    n: int
    generators: tuple
    c: Element
    key_order: int

    @property
    def p(self) -> int:
        return self.descriptor.p

    @property
    def alpha(self) -> int:
        """log_p of the key order."""
        a, q = 0, self.key_order
        while q > 1:
            q //= self.p
            a += 1
        return a

    @property
    def users(self) -> range:
        return range(1, self.n + 2)


@dataclass(frozen=True)
class PrivateKey:
    j: int
    a: int


@dataclass
class Transcript:
    params: ProtocolParams
    shares: dict = field(default_factory=dict)  # (i, j) -> g_i^{a_j}
    private_keys: dict = field(default_factory=dict)  # j -> a_j, test mode only
    derived_keys: dict = field(default_factory=dict)  # j -> key element, test mode only

    def share(self, i: int, j: int) -> Element:
        try:
            return self.shares[(i, j)]
        except KeyError:
            raise MissingShare(f"share g_{i}^(a_{j}) is missing from the transcript") from None

    @property
    def complete(self) -> bool:
        n = self.params.n
        return all((i, j) in self.shares for i in range(1, n + 1) for j in range(1, n + 2))

    def require_complete(self) -> None:
        """Raise MissingShare naming the first absent share."""
        n = self.params.n
        for j in range(1, n + 2):
            for i in range(1, n + 1):
                self.share(i, j)


def _with_class(descriptor: PlatformDescriptor, n: int) -> PlatformDescriptor:
    limit = descriptor.max_class
    if limit is not None and n != limit:
        raise ClassUnsupported(
            f"{descriptor.family} has class {limit}; cannot host {n + 1} users"
        )
    if descriptor.family == "quaternion" and descriptor.n != n:
        descriptor = replace(descriptor, n=n, N=None).validated()
    return descriptor


def _instance(descriptor, group, n, gens) -> Optional[ProtocolParams]:
    """Params for ``gens`` if c has the full order p^alpha, else None."""
    p, alpha = descriptor.p, descriptor.key_alpha
    c = weight_commutator(group, gens)
    if group.is_identity(c):
        return None
    order = order_p_power(group, c, p, alpha + 1)
    if order != alpha:
        return None
    return ProtocolParams(descriptor, group, n, tuple(gens), c, p**alpha)


def setup(
    descriptor: PlatformDescriptor,
    n: int,
    rng: random.Random,
    max_retries: int = 64,
    generators: Optional[Sequence[Element]] = None,
) -> ProtocolParams:
    """Choose public generators whose nested commutator has order p^alpha."""
    if n < 1:
        raise ClassUnsupported(f"need n >= 1, got {n}")
    descriptor = _with_class(descriptor, n)
    group = descriptor.make_group()
    if generators is not None:
        if len(generators) != n:
            raise ConfigError(f"expected {n} generators, got {len(generators)}")
        params = _instance(descriptor, group, n, list(generators))
        if params is None:
            raise DegenerateGenerators("nested commutator of the given generators is degenerate")
        return params
    for _ in range(max_retries):
        if descriptor.family == "quaternion":
            P = descriptor.quat_params()
            gens = [sample_s_element(P, P.i0, rng).q for _ in range(n)]
        else:
            gens = [group.random_element(rng) for _ in range(n)]
        params = _instance(descriptor, group, n, gens)
        if params is not None:
            return params
    raise DegenerateGenerators(f"no non-degenerate generators after {max_retries} attempts")


def gen_private(j: int, rng: random.Random, key_order: int) -> PrivateKey:
    """Uniform unit modulo the key order (a power of an odd prime)."""
    if key_order < 2:
        raise ValueError("key order must be at least 2")
    while True:
        a = rng.randrange(1, key_order)
        if gcd(a, key_order) == 1:
            return PrivateKey(j, a)


def compute_shares(params: ProtocolParams, key: PrivateKey) -> list:
    G = params.group
    a = key.a % params.key_order
    return [(i, power(G, g, a)) for i, g in enumerate(params.generators, start=1)]


def publish(params: ProtocolParams, keys: Iterable[PrivateKey]) -> Transcript:
    tr = Transcript(params)
    for key in keys:
        for i, share in compute_shares(params, key):
            tr.shares[(i, key.j)] = share
    return tr


def derive_key(params: ProtocolParams, j: int, own: PrivateKey, transcript: Transcript) -> Element:
    """User j's view of the shared key."""
    n, G = params.n, params.group
    if not 1 <= j <= n + 1:
        raise ValueError(f"user index {j} outside 1..{n + 1}")
    if j == n + 1:
        slots = [transcript.share(i, i) for i in range(1, n + 1)]
    else:
        slots = [transcript.share(i, n + 1 if i == j else i) for i in range(1, n + 1)]
    return power(G, weight_commutator(G, slots), own.a % params.key_order)


def degenerate_key(
    params: ProtocolParams,
    subset: Iterable[int],
    j: int,
    own: PrivateKey,
    transcript: Transcript,
) -> Element:
    """Key shared by the users in ``subset`` when every absent exponent is taken as 1.

    Member j puts the other members' shares into slots 1, 2, ... (in user
    order), keeps the bare generators elsewhere and raises the result to a_j.
    """
    members = sorted(set(subset))
    if len(members) < 2:
        raise SubsetTooSmall(f"a degenerate exchange needs at least 2 users, got {len(members)}")
    if j not in members:
        raise ValueError(f"user {j} is not in the subset {members}")
    n, G = params.n, params.group
    others = [k for k in members if k != j]
    slots = list(params.generators)
    for slot, k in enumerate(others, start=1):
        slots[slot - 1] = transcript.share(slot, k)
    return power(G, weight_commutator(G, slots), own.a % params.key_order)


def expected_key(params: ProtocolParams, exponents: Iterable[int]) -> Element:
    """c^{prod a_j}: the oracle value every honest user must reach."""
    e = prod(exponents) % params.key_order
    return power(params.group, params.c, e)


def run_exchange(
    params: ProtocolParams,
    rng: random.Random,
    exponents: Optional[Sequence[int]] = None,
) -> Transcript:
    """Full exchange in test mode: keys, shares and every user's derived key."""
    if exponents is None:
        keys = [gen_private(j, rng, params.key_order) for j in params.users]
    else:
        if len(exponents) != params.n + 1:
            raise ValueError(f"expected {params.n + 1} exponents")
        keys = [PrivateKey(j, a) for j, a in zip(params.users, exponents)]
    tr = publish(params, keys)
    for key in keys:
        tr.private_keys[key.j] = key.a
        tr.derived_keys[key.j] = derive_key(params, key.j, key, tr)
    return tr


def keys_agree(transcript: Transcript) -> bool:
    G = transcript.params.group
    encoded = {G.key(k) for k in transcript.derived_keys.values()}
    return len(encoded) == 1


# --- transcript file format -------------------------------------------------


def transcript_to_dict(transcript: Transcript, test_mode: bool = False) -> dict:
    params = transcript.params
    G = params.group
    out = {
        "platform": params.descriptor.to_dict(),
        "n": params.n,
        "generators": [G.encode(g).hex() for g in params.generators],
        "shares": [
            {"i": i, "j": j, "element_hex": G.encode(x).hex()}
            for (i, j), x in sorted(transcript.shares.items())
        ],
        "key_order": params.key_order,
    }
    if test_mode:
        out["private_keys"] = [{"j": j, "a": a} for j, a in sorted(transcript.private_keys.items())]
        out["derived_keys"] = [
            {"j": j, "key_hex": G.key(k).hex()} for j, k in sorted(transcript.derived_keys.items())
        ]
    return out


def transcript_from_dict(data: dict) -> Transcript:
    try:
        descriptor = PlatformDescriptor.from_dict(data["platform"])
        n = int(data["n"])
        descriptor = _with_class(descriptor, n)
        G = descriptor.make_group()
        gens = [G.decode(bytes.fromhex(h)) for h in data["generators"]]
        if len(gens) != n:
            raise ConfigError(f"transcript lists {len(gens)} generators for n={n}")
        c = weight_commutator(G, gens)
        params = ProtocolParams(descriptor, G, n, tuple(gens), c, int(data["key_order"]))
        tr = Transcript(params)
        for s in data.get("shares", []):
            tr.shares[(int(s["i"]), int(s["j"]))] = G.decode(bytes.fromhex(s["element_hex"]))
        for k in data.get("private_keys", []):
            tr.private_keys[int(k["j"])] = int(k["a"])
        for k in data.get("derived_keys", []):
            tr.derived_keys[int(k["j"])] = G.decode(bytes.fromhex(k["key_hex"]))
    except NilnikeError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed transcript: {exc!r}") from exc
    return tr
