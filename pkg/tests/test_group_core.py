import itertools
import random

import pytest
from hypothesis import given, strategies as st

from rsumset.group_core import (
    GroupElement,
    Modulus,
    Subgroup,
    UsageError,
    add,
    all_subgroups,
    coset_index,
    is_prime,
)


def test_is_prime_small():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


@pytest.mark.parametrize("p", [1, 2, 4, 9, 15])
def test_modulus_rejects_bad_p(p):
    with pytest.raises(UsageError):
        Modulus(p, 2)


def test_modulus_rejects_huge_group():
    with pytest.raises(UsageError):
        Modulus(1031, 2)


def test_encode_decode_roundtrip():
    M = Modulus(5, 3)
    for i in range(M.size):
        assert M.encode(M.decode(i)) == i
    assert M.element(1, 2, 0).index == 1 + 5 * 2


def test_add_examples():
    M = Modulus(5, 2)
    assert add(M.element(1, 2), M.element(4, 4)) == M.element(0, 1)
    assert add(M.element(0, 0), M.element(3, 1)) == M.element(3, 1)
    M7 = Modulus(7, 1)
    assert add(M7.element(6), M7.element(6)) == M7.element(5)


def test_add_mismatched_moduli():
    with pytest.raises(UsageError):
        Modulus(5, 2).element(1, 1) + Modulus(7, 2).element(1, 1)


def test_element_rejects_unreduced():
    with pytest.raises(UsageError):
        GroupElement(Modulus(5, 1), (5,))


@given(st.integers(0, 24), st.integers(0, 24), st.integers(0, 24))
def test_group_axioms(i, j, k):
    M = Modulus(5, 2)
    x, y, z = M.from_index(i), M.from_index(j), M.from_index(k)
    assert (x + y) + z == x + (y + z)
    assert x + y == y + x
    assert x + M.zero() == x
    assert x + (-x) == M.zero()


def test_coset_index_examples():
    M = Modulus(5, 2)
    H = Subgroup(M, (1, 0))
    assert coset_index(M.element(3, 0), H) == 0
    assert coset_index(M.element(2, 3), H) == 3


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_coset_index_is_surjective_homomorphism_with_kernel_h(p):
    M = Modulus(p, 2)
    for H in all_subgroups(M):
        labels = {x: coset_index(x, H) for x in M.elements()}
        assert set(labels.values()) == set(range(p))
        assert {x for x, v in labels.items() if v == 0} == set(H.members)
        xs = list(M.elements())
        rng = random.Random(p)
        for _ in range(300):
            x, y = rng.choice(xs), rng.choice(xs)
            assert labels[x + y] == (labels[x] + labels[y]) % p


def test_coset_index_homomorphism_exhaustive_p5():
    M = Modulus(5, 2)
    for H in all_subgroups(M):
        for x, y in itertools.product(M.elements(), repeat=2):
            assert coset_index(x + y, H) == (coset_index(x, H) + coset_index(y, H)) % 5


def test_coset_label_one_on_smallest_outside_element():
    M = Modulus(7, 2)
    for H in all_subgroups(M):
        assert coset_index(H.complement, H) == 1


def test_coset_index_rank_one_rejected():
    M = Modulus(5, 1)
    with pytest.raises(UsageError):
        coset_index(M.element(1), Subgroup(M, (1,)))


@pytest.mark.parametrize("p,count", [(3, 4), (5, 6), (7, 8), (11, 12)])
def test_all_subgroups(p, count):
    M = Modulus(p, 2)
    subs = all_subgroups(M)
    assert len(subs) == count
    for H in subs:
        assert len(H.members) == p
    for H, K in itertools.combinations(subs, 2):
        assert H.members & K.members == {M.zero()}


def test_all_subgroups_needs_rank_two():
    with pytest.raises(UsageError):
        all_subgroups(Modulus(5, 3))


def test_subgroup_generator_normalized():
    M = Modulus(5, 2)
    assert Subgroup(M, (2, 4)) == Subgroup(M, (1, 2))
    with pytest.raises(UsageError):
        Subgroup(M, (0, 0))
