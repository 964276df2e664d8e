import random

import pytest
from hypothesis import given, strategies as st

from nilnike.cyclic import CyclicTripleGroup
from nilnike.group import brute_force_slot_kernel, commutator, order_p_power, power


def as_matrix(a, q):
    return ((1, a.x, a.z), (0, 1, a.y), (0, 0, 1))


def matmul(A, B, q):
    return tuple(tuple(sum(A[r][k] * B[k][c] for k in range(3)) % q for c in range(3)) for r in range(3))


def test_mul_example_from_group_law():
    # (1,2,0)(2,1,4) mod 9: x = 3, y = 3, z = 0 + 4 + 1*1 = 5
    G = CyclicTripleGroup(3, 2)
    assert G.mul(G.element(1, 2, 0), G.element(2, 1, 4)) == G.element(3, 3, 5)


def test_mul_examples():
    G = CyclicTripleGroup(3, 2)
    a = G.element(4, 5, 6)
    assert G.mul(a, G.identity()) == a
    assert G.mul(G.element(1, 0, 0), G.element(0, 1, 0)) == G.element(1, 1, 1)


@pytest.mark.parametrize("p,alpha", [(3, 1), (3, 4), (5, 3), (101, 2)])
def test_mul_matches_matrices(p, alpha, rng):
    G = CyclicTripleGroup(p, alpha)
    for _ in range(300):
        a, b = G.random_element(rng), G.random_element(rng)
        assert as_matrix(G.mul(a, b), G.q) == matmul(as_matrix(a, G.q), as_matrix(b, G.q), G.q)
        assert G.mul(a, G.inv(a)) == G.identity()


def test_commutator_examples():
    G = CyclicTripleGroup(3, 2)
    c = G.commutator_closed_form(G.element(1, 0, 0), G.element(0, 1, 0))
    assert c == G.element(0, 0, 1)
    assert order_p_power(G, c, 3, 8) == 2
    assert G.pow_closed_form(G.element(4, 4, 4), 0) == G.identity()
    assert G.pow_closed_form(G.element(1, 1, 0), 3) == G.element(3, 3, 3)


@pytest.mark.parametrize("p,alpha", [(3, 1), (3, 4), (7, 2), (2**31 - 1, 3)])
def test_closed_forms_match_oracle(p, alpha, rng):
    G = CyclicTripleGroup(p, alpha)
    for _ in range(1000):
        a, b = G.random_element(rng), G.random_element(rng)
        e = rng.randrange(-(G.q**2), G.q**2)
        assert G.pow_closed_form(a, e) == power(G, a, e)
        assert G.commutator_closed_form(a, b) == commutator(G, a, b)


@pytest.mark.parametrize("p,alpha", [(3, 1), (3, 2), (3, 4), (5, 2), (7, 2)])
def test_standard_pair_has_full_order_and_slot_index(p, alpha):
    G = CyclicTripleGroup(p, alpha)
    g1, g2 = G.element(1, 0, 0), G.element(0, 1, 0)
    c = commutator(G, g1, g2)
    assert order_p_power(G, c, p, 16) == alpha
    for slot in (1, 2):
        assert brute_force_slot_kernel(G, [g1, g2], slot) == p**alpha


def test_pairing_is_bilinear_not_alternating():
    G = CyclicTripleGroup(3, 2)
    assert G.pairing(1, 1) == 1  # e(x, x) != 0, so e itself is not alternating
    for x in range(9):
        for y in range(9):
            for y2 in range(9):
                assert G.pairing(x, y + y2) == (G.pairing(x, y) + G.pairing(x, y2)) % 9


@given(seed=st.integers(0, 2**32))
def test_induced_commutator_map_is_alternating(seed):
    rng = random.Random(seed)
    G = CyclicTripleGroup(5, 3)
    a, b = G.random_element(rng), G.random_element(rng)
    assert G.commutator_closed_form(a, a) == G.identity()
    assert G.commutator_closed_form(a, b) == G.inv(G.commutator_closed_form(b, a))


def test_is_central():
    G = CyclicTripleGroup(3, 2)
    assert G.is_central(G.element(0, 0, 5))
    assert not G.is_central(G.element(0, 3, 0))
