"""Invariant suites runnable from the command line.

Each suite raises AssertionError (or a package error) on the first violation;
:func:`run_suites` runs them in order and records pass/fail per suite.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Callable

from . import quaternion as Q
from .attacks import APPLICABLE, run_attack
from .cyclic import CyclicTripleGroup
from .group import (
    Group,
    brute_force_slot_kernel,
    commutator,
    nested_commutator,
    order_p_power,
    power,
)
from .heisenberg import HeisenbergGroup
from .numtheory import Residue, find_qnr, hensel_sqrt, mod_inv
from .platforms import PlatformDescriptor
from .protocol import PrivateKey, degenerate_key, expected_key, keys_agree, run_exchange, setup
from .rng import make_rng


@dataclass(frozen=True)
class VerifyConfig:
    p: int = 7
    m: int = 2
    alpha: int = 2
    n: int = 3
    seed: int = 0
    trials: int = 50


def _groups(cfg: VerifyConfig) -> dict[str, Group]:
    P = Q.QuatParams.create(cfg.p, cfg.alpha, cfg.n)
    return {
        "heisenberg": HeisenbergGroup(cfg.p, cfg.m),
        "cyclic-triple": CyclicTripleGroup(cfg.p, cfg.alpha),
        "quaternion": Q.QuaternionGroup(P),
    }


def suite_numtheory(cfg: VerifyConfig, rng: random.Random) -> None:
    p, N = cfg.p, cfg.alpha + 2
    M = p**N
    t = find_qnr(p).value
    assert pow(t, (p - 1) // 2, p) == p - 1, "find_qnr returned a residue"
    for _ in range(cfg.trials):
        x = rng.randrange(1, M)
        if x % p == 0:
            continue
        y = mod_inv(Residue(x, M))
        assert x * y.value % M == 1, "mod_inv is not an inverse"
        assert mod_inv(y).value == x, "mod_inv is not an involution"
        s = Residue(x * x, M)
        r = hensel_sqrt(s, Residue(x, p))
        assert r.value**2 % M == s.value and r.value % p == x % p, "hensel_sqrt wrong root"


def suite_quaternion_relations(cfg: VerifyConfig, rng: random.Random) -> None:
    Q.check_relations(Q.QuatParams.create(cfg.p, cfg.alpha, cfg.n))


def suite_group_axioms(cfg: VerifyConfig, rng: random.Random) -> None:
    for name, G in _groups(cfg).items():
        e = G.identity()
        for _ in range(cfg.trials):
            x, y, z = (G.random_element(rng) for _ in range(3))
            assert G.eq(G.mul(G.mul(x, y), z), G.mul(x, G.mul(y, z))), f"{name}: associativity"
            assert G.eq(G.mul(x, e), x) and G.eq(G.mul(e, x), x), f"{name}: identity"
            assert G.is_identity(G.mul(x, G.inv(x))), f"{name}: inverse"
            assert G.eq(G.decode(G.encode(x)), x), f"{name}: encoding round trip"


def suite_closed_forms(cfg: VerifyConfig, rng: random.Random) -> None:
    for G in (HeisenbergGroup(cfg.p, cfg.m), CyclicTripleGroup(cfg.p, cfg.alpha)):
        for _ in range(cfg.trials):
            x, y = G.random_element(rng), G.random_element(rng)
            a = rng.randrange(-(10**6), 10**6)
            assert G.pow_closed_form(x, a) == power(G, x, a), f"{G.family}: power formula"
            assert G.commutator_closed_form(x, y) == commutator(G, x, y), (
                f"{G.family}: commutator formula"
            )


def suite_multilinearity(cfg: VerifyConfig, rng: random.Random) -> None:
    for name, G in _groups(cfg).items():
        n = 2 if name != "quaternion" else cfg.n
        if name == "quaternion":
            P = G.params
            G = Q.QuaternionGroup(P, level=P.quotient_level)
            gens = [Q.sample_s_element(P, P.i0, rng).q for _ in range(n)]
        else:
            gens = [G.random_element(rng) for _ in range(n)]
        c = nested_commutator(G, gens)
        for _ in range(max(1, cfg.trials // 5)):
            i = rng.randrange(n)
            r, s = rng.randrange(1, 10**4), rng.randrange(1, 10**4)

            def ev(e):
                xs = list(gens)
                xs[i] = power(G, gens[i], e)
                return nested_commutator(G, xs)

            assert G.eq(ev(r + s), G.mul(ev(r), ev(s))), f"{name}: slot {i + 1} not additive"
            assert G.eq(ev(r), power(G, c, r)), f"{name}: slot {i + 1} power mismatch"


def suite_slot_kernel(cfg: VerifyConfig, rng: random.Random) -> None:
    for G in (HeisenbergGroup(cfg.p, cfg.m), CyclicTripleGroup(cfg.p, cfg.alpha)):
        for _ in range(max(1, cfg.trials // 10)):
            gens = [G.random_element(rng) for _ in range(2)]
            c = nested_commutator(G, gens)
            order = cfg.p ** order_p_power(G, c, cfg.p, 64)
            for slot in (1, 2):
                idx = brute_force_slot_kernel(G, gens, slot)
                assert idx == order, f"{G.family}: slot index {idx} != |c| = {order}"


def suite_quaternion_filtration(cfg: VerifyConfig, rng: random.Random) -> None:
    P = Q.QuatParams.create(cfg.p, cfg.alpha, cfg.n)
    G = Q.QuaternionGroup(P)
    top = 2 * P.N - 4
    for _ in range(cfg.trials):
        k = rng.randrange(1, top // 2 + 1)
        ell = rng.randrange(1, top - k + 1)
        x, y = Q.sample_s_element(P, k, rng), Q.sample_s_element(P, ell, rng)
        assert Q.level_of(P, commutator(G, x.q, y.q)).at_least(k + ell), "commutator level"
        if k + 2 < top:
            assert Q.level_of(P, power(G, x.q, P.p)).at_least(k + 2), "p-th power shift"


def suite_layer_exponent(cfg: VerifyConfig, rng: random.Random) -> None:
    P = Q.QuatParams.create(cfg.p, cfg.alpha, cfg.n)
    G = Q.QuaternionGroup(P)
    for k in range(1, cfg.n + 1):
        for _ in range(max(1, cfg.trials // cfg.n)):
            x = Q.sample_s_element(P, k * P.i0, rng)
            top = (k + 1) * P.i0
            assert Q.level_of(P, power(G, x.q, P.p**P.alpha)).at_least(top), "x^(p^alpha) level"


def suite_layer_power_formula(cfg: VerifyConfig, rng: random.Random) -> None:
    P = Q.QuatParams.create(cfg.p, cfg.alpha, max(cfg.n, 3))
    G = Q.QuaternionGroup(P)
    for k in range(1, 4):
        for _ in range(cfg.trials):
            x = Q.sample_s_element(P, k * P.i0, rng)
            m = rng.randrange(0, 10**6)
            want = Q.reduce_mod_layer(P, power(G, x.q, m), (k + 1) * P.i0)
            assert Q.pow_layer_formula(P, x, m, k) == want, f"power formula at k={k}, m={m}"


def suite_protocol(cfg: VerifyConfig, rng: random.Random) -> None:
    descriptors = [
        (PlatformDescriptor.heisenberg(cfg.p, cfg.m), 2),
        (PlatformDescriptor.cyclic_triple(cfg.p, cfg.alpha), 2),
        (PlatformDescriptor.quaternion(cfg.p, cfg.alpha, cfg.n), cfg.n),
    ]
    for d, n in descriptors:
        for _ in range(max(1, cfg.trials // 10)):
            params = setup(d, n, rng)
            tr = run_exchange(params, rng)
            assert keys_agree(tr), f"{d.family}: users derived different keys"
            want = expected_key(params, tr.private_keys.values())
            assert params.group.eq(tr.derived_keys[1], want), f"{d.family}: key formula"
            for subset in combinations(params.users, 2):
                keys = [
                    degenerate_key(params, subset, j, PrivateKey(j, tr.private_keys[j]), tr)
                    for j in subset
                ]
                assert params.group.eq(*keys), f"{d.family}: degeneration {subset}"


def suite_attacks(cfg: VerifyConfig, rng: random.Random) -> None:
    descriptors = [
        (PlatformDescriptor.heisenberg(cfg.p, cfg.m), 2),
        (PlatformDescriptor.cyclic_triple(cfg.p, cfg.alpha), 2),
        (PlatformDescriptor.quaternion(cfg.p, cfg.alpha, cfg.n), cfg.n),
    ]
    for d, n in descriptors:
        params = setup(d, n, rng)
        tr = run_exchange(params, rng)
        honest = params.group.key(tr.derived_keys[1]).hex()
        for name in APPLICABLE[d.family]:
            report = run_attack(name, tr)
            assert report.success, f"{name} on {d.family} failed: {report.error}"
            assert report.key_hex == honest, f"{name} on {d.family} recovered a wrong key"


SUITES: list[tuple[str, Callable[[VerifyConfig, random.Random], None]]] = [
    ("numtheory", suite_numtheory),
    ("quaternion-relations", suite_quaternion_relations),
    ("group-axioms", suite_group_axioms),
    ("closed-forms", suite_closed_forms),
    ("multilinearity", suite_multilinearity),
    ("slot-kernel", suite_slot_kernel),
    ("quaternion-filtration", suite_quaternion_filtration),
    ("layer-exponent", suite_layer_exponent),
    ("layer-power-formula", suite_layer_power_formula),
    ("protocol", suite_protocol),
    ("attacks", suite_attacks),
]


def run_suites(cfg: VerifyConfig, only: list[str] | None = None) -> list[tuple[str, bool, str]]:
    results = []
    for name, fn in SUITES:
        if only and name not in only:
            continue
        try:
            fn(cfg, make_rng(cfg.seed, "verify", name))
        except Exception as exc:  # any failure, including package errors, fails the suite
            results.append((name, False, f"{type(exc).__name__}: {exc}"))
        else:
            results.append((name, True, ""))
    return results
