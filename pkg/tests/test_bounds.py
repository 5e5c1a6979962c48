import itertools
import random

import pytest

from rsumset.bounds import (
    block_bounds,
    cd_bound,
    dsh_bound,
    is_ap_pair,
    min0_capped,
    pairwise_block_bound,
    vosper_bound,
)
from rsumset.group_core import Modulus, UsageError, all_subgroups
from rsumset.profiles import CosetProfile, raw_profile
from rsumset.setops import PointSet, double_restricted, restricted_sumset, sumset

M5 = Modulus(5, 1)


def S(M, *idx):
    return PointSet.from_indices(M, idx)


def test_min0_capped():
    assert min0_capped(-3, 5) == 0
    assert min0_capped(7, 5) == 5
    assert min0_capped(3, 5) == 3


def test_cd_bound():
    assert cd_bound(3, 3, 5).value == 5 and cd_bound(3, 3, 5).source == "CD"
    assert cd_bound(1, 1, 7).value == 1
    assert cd_bound(4, 4, 5).value == 5
    b = cd_bound(0, 3, 5)
    assert (b.value, b.source) == (0, "MIN0")


def test_dsh_bound():
    assert dsh_bound(2, 2, 5).value == 1
    assert dsh_bound(1, 1, 5).value == 0
    b = dsh_bound(3, 2, 5, distinct_sizes=True)
    assert (b.value, b.source) == (3, "DSH-distinct")


def test_pairwise_block_bound_examples():
    assert pairwise_block_bound(CosetProfile(5, (3, 2, 2, 2, 2)), 1).value == 4
    assert pairwise_block_bound((3, 0, 0, 0, 0), 0).value == 3
    assert all(pairwise_block_bound((0,) * 5, i).value == 0 for i in range(5))
    assert block_bounds((3, 2, 2, 2, 2)) == tuple(pairwise_block_bound((3, 2, 2, 2, 2), i).value for i in range(5))


def test_pairwise_block_bound_by_hand():
    # i = 2, sizes (3,2,2,2,2): j=1 is the diagonal term 2+2-1-2 = 1; j=0 and j=2 give 3+2-1 = 4
    assert pairwise_block_bound((3, 2, 2, 2, 2), 2).value == 4
    # lone block of size 1: diagonal term is negative, clamps to 0
    assert pairwise_block_bound((1, 0, 0, 0, 0), 0).value == 0


def test_is_ap_pair_examples():
    assert is_ap_pair(S(M5, 0, 1, 2), S(M5, 4, 0)) == 1
    assert is_ap_pair(S(M5, 0, 1, 2), S(M5, 0, 2)) is None
    assert is_ap_pair(S(M5, 0, 1), S(M5, 0, 1)) is not None
    with pytest.raises(UsageError):
        is_ap_pair(S(M5, 0), S(M5, 0, 1))
    with pytest.raises(UsageError):
        is_ap_pair(S(Modulus(5, 2), 0, 1), S(Modulus(5, 2), 0, 1))


def test_bounds_sound_exhaustive_p5():
    subsets = [PointSet(M5, b) for b in range(1, 32)]
    for A, B in itertools.product(subsets, repeat=2):
        assert sumset(A, B).card >= cd_bound(A.card, B.card, 5).value
        assert restricted_sumset(A, B).card >= dsh_bound(A.card, B.card, 5, A.card != B.card).value
        assert sumset(A, B).card >= vosper_bound(A, B).value


@pytest.mark.parametrize("p", [7, 11])
def test_vosper_direction_random(p):
    M = Modulus(p, 1)
    rng = random.Random(p)
    for _ in range(3000):
        A = PointSet.from_indices(M, rng.sample(range(p), rng.randint(2, p - 3)))
        B = PointSet.from_indices(M, rng.sample(range(p), rng.randint(2, p - 3)))
        assert sumset(A, B).card >= vosper_bound(A, B).value


def test_block_bound_sound_p5():
    M = Modulus(5, 2)
    rng = random.Random(9)
    for _ in range(400):
        A = PointSet.from_indices(M, rng.sample(range(25), rng.randint(0, 25)))
        D = double_restricted(A)
        for H in all_subgroups(M):
            sizes = raw_profile(A, H)
            for i, bound in enumerate(block_bounds(sizes)):
                assert (D.bits & H.coset_masks[i]).bit_count() >= bound
