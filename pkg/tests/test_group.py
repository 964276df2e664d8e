import random

import pytest
from hypothesis import given, strategies as st

from nilnike.cyclic import CyclicTripleGroup
from nilnike.errors import CapExceeded, TooLarge, TooShort
from nilnike.group import (
    CountingGroup,
    brute_force_slot_kernel,
    commutator,
    cyclic_subgroup,
    nested_commutator,
    order_p_power,
    power,
    weight_commutator,
)
from nilnike.heisenberg import HeisenbergGroup
from nilnike.platforms import PlatformDescriptor

H5 = HeisenbergGroup(5, 1)
C9 = CyclicTripleGroup(3, 2)


def naive_power(G, x, e):
    out = G.identity()
    for _ in range(e):
        out = G.mul(out, x)
    return out


def test_pow_examples(rng):
    x = H5.random_element(rng)
    assert power(H5, x, 0) == H5.identity()
    assert power(H5, x, 1) == x
    assert power(H5, H5.element([1], [2], 0), 3) == H5.element([3], [1], 1)


def test_pow_negative_is_inverse_power(rng):
    x = H5.random_element(rng)
    assert power(H5, x, -3) == H5.inv(power(H5, x, 3))


@pytest.mark.parametrize("G", [H5, HeisenbergGroup(7, 3), C9, CyclicTripleGroup(5, 3)], ids=repr)
def test_pow_matches_naive_multiplication(G, rng):
    for _ in range(5):
        x = G.random_element(rng)
        for e in range(65):
            assert power(G, x, e) == naive_power(G, x, e)


def test_commutator_examples(rng):
    x = H5.random_element(rng)
    assert H5.is_identity(commutator(H5, x, x))
    assert H5.is_identity(commutator(H5, x, H5.identity()))
    c = commutator(H5, H5.element([1], [0], 0), H5.element([0], [1], 0))
    assert c == H5.element([0], [0], 1)


def test_commutator_convention(rng):
    # [x, y] = x y x^-1 y^-1
    for _ in range(20):
        x, y = H5.random_element(rng), H5.random_element(rng)
        want = H5.mul(H5.mul(H5.mul(x, y), H5.inv(x)), H5.inv(y))
        assert commutator(H5, x, y) == want


def test_nested_commutator_examples(rng):
    x, y, z = (H5.random_element(rng) for _ in range(3))
    assert nested_commutator(H5, [x, y]) == commutator(H5, x, y)
    assert H5.is_identity(nested_commutator(H5, [x, H5.identity()]))
    assert H5.is_identity(nested_commutator(H5, [x, y, z]))
    with pytest.raises(TooShort):
        nested_commutator(H5, [x])


def test_nested_commutator_is_right_normed():
    D = PlatformDescriptor.quaternion(7, 1, 3)
    G = D.make_group()
    rng = random.Random(3)
    from nilnike.quaternion import sample_s_element

    P = D.quat_params()
    xs = [sample_s_element(P, 1, rng).q for _ in range(3)]
    want = commutator(G, xs[0], commutator(G, xs[1], xs[2]))
    assert G.eq(nested_commutator(G, xs), want)


def test_weight_one_commutator_is_the_element(rng):
    x = H5.random_element(rng)
    assert weight_commutator(H5, [x]) == x


def test_order_p_power_examples():
    assert order_p_power(H5, H5.identity(), 5, 4) == 0
    assert order_p_power(H5, H5.element([0], [0], 1), 5, 4) == 1
    assert order_p_power(C9, C9.element(0, 0, 1), 3, 4) == 2
    with pytest.raises(CapExceeded):
        order_p_power(C9, C9.element(0, 0, 1), 3, 1)


def test_cyclic_subgroup_bound():
    assert len(cyclic_subgroup(C9, C9.element(1, 0, 0))) == 9
    with pytest.raises(TooLarge):
        cyclic_subgroup(C9, C9.element(1, 0, 0), bound=5)


def test_slot_kernel_examples():
    g1, g2 = H5.element([1], [0], 0), H5.element([0], [1], 0)
    assert brute_force_slot_kernel(H5, [g1, g2], 1) == 5
    assert brute_force_slot_kernel(H5, [g1, g2], 2) == 5
    # c trivial: K_i is all of <g_i>
    assert brute_force_slot_kernel(H5, [g1, g1], 1) == 1
    assert brute_force_slot_kernel(H5, [g1, g1], 2) == 1
    a1, a2 = C9.element(1, 0, 0), C9.element(0, 1, 0)
    assert brute_force_slot_kernel(C9, [a1, a2], 1) == 9
    assert brute_force_slot_kernel(C9, [a1, a2], 2) == 9


@pytest.mark.parametrize("G", [H5, HeisenbergGroup(3, 2), C9], ids=repr)
@given(r=st.integers(-500, 500), s=st.integers(-500, 500), seed=st.integers(0, 2**32))
def test_multilinearity_class_two(G, r, s, seed):
    rng = random.Random(seed)
    g = [G.random_element(rng) for _ in range(2)]
    c = nested_commutator(G, g)
    for i in range(2):
        def ev(e):
            xs = list(g)
            xs[i] = power(G, g[i], e)
            return nested_commutator(G, xs)

        assert ev(r + s) == G.mul(ev(r), ev(s))
        assert ev(r) == power(G, c, r)


@pytest.mark.parametrize("G", [H5, HeisenbergGroup(11, 2), C9], ids=repr)
def test_encoding_round_trip_and_width(G, rng):
    for _ in range(50):
        x = G.random_element(rng)
        data = G.encode(x)
        assert len(data) == 1 + G.width * len(G.coordinates(x))
        assert G.decode(data) == x


def test_counting_group_counts_mul_and_inv(rng):
    G = CountingGroup(H5)
    x = G.random_element(rng)
    G.mul(x, x)
    G.inv(x)
    assert G.ops == 2
    commutator(G, x, x)
    assert G.ops == 6
    assert G.p == 5
