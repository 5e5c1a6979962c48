import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import burnside_orbit_count, naive_sumset
from rsumset.group_core import Modulus, Subgroup, UsageError, all_subgroups
from rsumset.setops import (
    AffineMap,
    PointSet,
    SetFormatError,
    apply_affine,
    canonical_form,
    double_restricted,
    dumps_binary,
    dumps_text,
    general_linear_group,
    loads_binary,
    loads_text,
    read_set,
    restricted_size,
    restricted_sumset,
    sumset,
    translate,
    write_set,
)

M51 = Modulus(5, 1)
M52 = Modulus(5, 2)


def S(M, *idx):
    return PointSet.from_indices(M, idx)


def random_set(rng, M, k=None):
    k = rng.randint(0, M.size) if k is None else k
    return PointSet.from_indices(M, rng.sample(range(M.size), k))


def random_affine(rng, M):
    mats = general_linear_group(M.p, M.r)
    return AffineMap(M, rng.choice(mats), tuple(rng.randrange(M.p) for _ in range(M.r)))


def test_sumset_examples():
    assert sumset(S(M51, 0, 1), S(M51, 0, 1)) == S(M51, 0, 1, 2)
    assert sumset(S(M51), S(M51, 0, 1)) == S(M51)
    assert sumset(S(M51, 0, 1, 2), S(M51, 0, 1, 2)).card == 5


def test_restricted_sumset_examples():
    for g in range(5):
        assert double_restricted(S(M51, g)).card == 0
    assert double_restricted(S(M51, 0, 1, 2, 3)) == PointSet.full(M51)
    assert double_restricted(S(M51, 0, 1, 2)) == S(M51, 1, 2, 3)


def test_double_restricted_templates():
    H0 = all_subgroups(M52)[1]
    A = PointSet(M52, H0.coset_masks[0] | H0.coset_masks[1]).add_point(min(H0.coset(2)))
    assert A.card == 11 and restricted_size(A) == 20
    B = PointSet(M52, H0.coset_masks[0]).add_point(min(H0.coset(1)))
    assert B.card == 6 and restricted_size(B) == 10
    assert double_restricted(S(M52)).card == 0


def test_mismatched_moduli():
    with pytest.raises(UsageError):
        sumset(S(M51, 0), S(Modulus(7, 1), 0))
    with pytest.raises(UsageError):
        restricted_sumset(S(M51, 0), S(M52, 0))


@pytest.mark.parametrize("p,r", [(3, 1), (5, 1), (3, 2), (5, 2), (7, 2), (3, 3)])
def test_kernels_match_naive_oracle(p, r):
    M = Modulus(p, r)
    rng = random.Random(p * 10 + r)
    for _ in range(200):
        A, B = random_set(rng, M), random_set(rng, M)
        assert set(sumset(A, B).indices()) == naive_sumset(A.indices(), B.indices(), p, r)
        assert set(restricted_sumset(A, B).indices()) == naive_sumset(A.indices(), B.indices(), p, r, True)


def test_disjoint_restricted_equals_sumset():
    rng = random.Random(1)
    for _ in range(200):
        A = random_set(rng, M52)
        B = PointSet(M52, ((1 << 25) - 1) & ~A.bits & random_set(rng, M52).bits)
        assert restricted_sumset(A, B) == sumset(A, B)


@given(st.integers(0, (1 << 25) - 1), st.integers(0, (1 << 25) - 1), st.integers(0, (1 << 25) - 1))
@settings(max_examples=60)
def test_sumset_algebra(a, b, c):
    A, B, C = PointSet(M52, a), PointSet(M52, b), PointSet(M52, c)
    assert sumset(A, B) == sumset(B, A)
    assert sumset(sumset(A, B), C) == sumset(A, sumset(B, C))
    assert sumset(A, S(M52, 0)) == A
    if A.card and B.card:
        assert sumset(A, B).card >= max(A.card, B.card)


def test_translate_properties():
    rng = random.Random(2)
    for _ in range(100):
        A = random_set(rng, M52)
        g = M52.from_index(rng.randrange(25))
        assert translate(A, M52.zero()) == A
        assert translate(translate(A, g), -g) == A
        assert translate(A, g).card == A.card
        assert double_restricted(translate(A, g)) == translate(translate(double_restricted(A), g), g)
        assert restricted_size(translate(A, g)) == restricted_size(A)


def test_affine_map_validation_and_identity():
    with pytest.raises(UsageError):
        AffineMap(M52, ((1, 2), (2, 4)), (0, 0))
    rng = random.Random(3)
    A = random_set(rng, M52, 7)
    assert apply_affine(A, AffineMap.identity(M52)) == A


def test_affine_invariance_and_composition():
    rng = random.Random(4)
    for _ in range(100):
        A = random_set(rng, M52)
        T1, T2 = random_affine(rng, M52), random_affine(rng, M52)
        TA = apply_affine(A, T1)
        assert TA.card == A.card
        assert restricted_size(TA) == restricted_size(A)
        assert apply_affine(TA, T2) == apply_affine(A, T2.compose(T1))


def test_partition_identity():
    rng = random.Random(5)
    for _ in range(50):
        A = random_set(rng, M52)
        D = double_restricted(A)
        for H in all_subgroups(M52):
            assert sum((D.bits & m).bit_count() for m in H.coset_masks) == D.card


def test_canonical_form_properties():
    rng = random.Random(6)
    for _ in range(30):
        A = random_set(rng, M52)
        c = canonical_form(A)
        assert canonical_form(c) == c
        assert canonical_form(translate(A, M52.from_index(rng.randrange(25)))) == c
        assert canonical_form(apply_affine(A, random_affine(rng, M52))) == c
        assert c.bits <= A.bits


def test_canonical_form_orbit_count_matches_burnside():
    reps = {canonical_form(PointSet.from_indices(M52, t)).bits for t in itertools.combinations(range(25), 3)}
    assert len(reps) == burnside_orbit_count(5, 3) == 2


def test_canonical_form_index_path_matches_integer_order():
    # p^r = 67 > 64 takes the sorted-index path; compare with a brute-force integer minimum
    M = Modulus(67, 1)
    A = PointSet.from_indices(M, [3, 10, 11, 50])
    best = min(
        sum(1 << ((a * x + t) % 67) for x in A.indices())
        for a in range(1, 67)
        for t in range(67)
    )
    assert canonical_form(A).bits == best


def test_canonical_form_refuses_oversized_group():
    with pytest.raises(UsageError):
        canonical_form(PointSet.from_indices(Modulus(11, 2), [0, 1]))


def test_text_roundtrip_and_errors(tmp_path):
    A = S(M52, 0, 3, 24)
    assert loads_text(dumps_text(A)) == A
    assert loads_text("# comment\n5 2\n3  # x\n0\n\n24\n") == A
    with pytest.raises(SetFormatError) as e:
        loads_text("5 2\n1\nabc\n")
    assert e.value.lineno == 3
    with pytest.raises(SetFormatError):
        loads_text("5 2\n25\n")
    with pytest.raises(SetFormatError):
        loads_text("6 2\n1\n")
    p = tmp_path / "a.txt"
    write_set(p, A)
    assert read_set(p) == A


def test_binary_roundtrip(tmp_path):
    A = S(M52, 0, 8, 9, 24)
    data = dumps_binary(A)
    assert len(data) == 4 and data[0] == 1 and loads_binary(data, M52) == A
    p = tmp_path / "a.pset"
    write_set(p, A)
    assert read_set(p, M52) == A
    with pytest.raises(UsageError):
        read_set(p)
    with pytest.raises(SetFormatError):
        loads_binary(b"\x00", M52)
