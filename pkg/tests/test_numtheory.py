import pytest
from hypothesis import given, strategies as st

from nilnike.errors import BadBranch, NonUnit, NotASquare
from nilnike.numtheory import (
    Residue,
    Valuation,
    binom2,
    find_qnr,
    hensel_sqrt,
    is_prime,
    mod_inv,
    mod_pow,
    v_p,
)

SMALL_PRIMES = [p for p in range(3, 10**4) if is_prime(p)]


def test_residue_reduces():
    assert Residue(130, 125) == Residue(5, 125)
    assert Residue(-1, 125).value == 124


def test_mod_pow_examples():
    assert mod_pow(Residue(2, 1000), 10) == Residue(24, 1000)
    assert mod_pow(Residue(77, 1000), 0) == Residue(1, 1000)
    assert mod_pow(Residue(7, 125), 1) == Residue(7, 125)


def test_mod_inv_examples():
    assert mod_inv(Residue(3, 125)) == Residue(42, 125)
    assert mod_inv(Residue(1, 5**7)) == Residue(1, 5**7)
    with pytest.raises(NonUnit):
        mod_inv(Residue(5, 125))


@given(st.sampled_from([3, 5, 7, 101]), st.integers(1, 8), st.integers(1, 10**9))
def test_mod_inv_is_involutive_inverse(p, N, x):
    M = p**N
    if x % p == 0:
        x += 1
    r = Residue(x, M)
    y = mod_inv(r)
    assert (r.value * y.value) % M == 1
    assert mod_inv(y) == r


def test_v_p_examples():
    assert v_p(50, 5) == Valuation(2)
    assert v_p(7, 5) == Valuation(0)
    z = v_p(0, 5)
    assert not z.finite
    assert z.at_least(10**6)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_v_p_additive_exhaustive(p):
    for x in range(1, 1001):
        vx = v_p(x, p).order
        for y in range(1, 1001, 7):
            assert v_p(x * y, p).order == vx + v_p(y, p).order
            assert v_p(-x * y, p).order == vx + v_p(y, p).order


def test_find_qnr_examples():
    assert find_qnr(5).value == 2
    assert find_qnr(7).value == 3
    assert find_qnr(3).value == 2


def test_find_qnr_euler_criterion_all_small_primes():
    for p in SMALL_PRIMES:
        t = find_qnr(p).value
        assert pow(t, (p - 1) // 2, p) == p - 1
        # smallest: every smaller positive integer is a residue
        assert all(pow(s, (p - 1) // 2, p) == 1 for s in range(1, t))


def test_hensel_examples():
    assert hensel_sqrt(Residue(56, 125), Residue(1, 5)) == Residue(41, 125)
    assert hensel_sqrt(Residue(1, 5**9), Residue(1, 5)) == Residue(1, 5**9)
    with pytest.raises(NotASquare):
        hensel_sqrt(Residue(2, 125), Residue(1, 5))
    with pytest.raises(BadBranch):
        hensel_sqrt(Residue(56, 125), Residue(2, 5))


@given(st.sampled_from([3, 5, 7, 13, 2**31 - 1]), st.integers(1, 12), st.integers(1, 10**12))
def test_hensel_roots_and_other_branch(p, N, b):
    if b % p == 0:
        b += 1
    M = p**N
    s = Residue(b * b, M)
    r = hensel_sqrt(s, Residue(b, p))
    assert r.value**2 % M == s.value
    assert r.value % p == b % p
    other = hensel_sqrt(s, Residue(-b, p))
    assert other.value == (-r.value) % M


def test_binom2():
    assert binom2(3) == 3
    assert binom2(0) == 0
    assert binom2(1) == 0
    assert binom2(-2) == 3
