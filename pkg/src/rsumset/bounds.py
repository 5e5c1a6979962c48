"""Lower bounds on |A + B| and |A +^ B| for subsets of Z_p.

Cauchy-Davenport (CD), Dias da Silva-Hamidoune (DSH) and the per-coset
block bound built from them are used as black boxes here; their soundness
is checked against brute force in the tests, not proved.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .group_core import UsageError
from .setops import PointSet, _iter_bits


@dataclass(frozen=True)
class BoundValue:
    value: int
    source: str  # CD | DSH | DSH-distinct | MIN0 | VOSPER | EQ1

    def __int__(self) -> int:
        return self.value


def min0_capped(x: int, cap: int) -> int:
    """max(0, min(x, cap))."""
    return max(0, min(x, cap))


def cd_bound(a: int, b: int, p: int) -> BoundValue:
    if a <= 0 or b <= 0:
        # empty operand: the sumset is empty
        return BoundValue(0, "MIN0")
    return BoundValue(min(a + b - 1, p), "CD")


def dsh_bound(a: int, b: int, p: int, distinct_sizes: bool = False) -> BoundValue:
    if distinct_sizes:
        return BoundValue(min0_capped(a + b - 2, p), "DSH-distinct")
    return BoundValue(min0_capped(a + b - 3, p), "DSH")


def _sizes_of(profile) -> tuple[int, ...]:
    return tuple(getattr(profile, "sizes", profile))


def pairwise_block_bound(sizes, i: int) -> BoundValue:
    """Lower bound on |B_i| = |2^A intersect H_i| from coset sizes alone.

    Max over j with A_j, A_{i-j} both nonempty of
    min0(|A_j| + |A_{i-j}| - 1 - 2*eps, p), where eps = 1 iff 2j = i (mod p).
    `sizes` is a CosetProfile or a plain length-p sequence.
    """
    s = _sizes_of(sizes)
    p = len(s)
    i %= p
    best = 0
    for j in range(p):
        a, b = s[j], s[(i - j) % p]
        if a == 0 or b == 0:
            continue
        eps = 1 if (2 * j - i) % p == 0 else 0
        v = min0_capped(a + b - 1 - 2 * eps, p)
        if v > best:
            best = v
    return BoundValue(best, "EQ1")


def block_bounds(sizes: Sequence[int]) -> tuple[int, ...]:
    """pairwise_block_bound for every coset index."""
    s = tuple(sizes)
    p = len(s)
    out = [0] * p
    nz = [j for j in range(p) if s[j]]
    for j in nz:
        a = s[j]
        for k in nz:
            if k < j:
                continue
            i = (j + k) % p
            if j == k:
                v = min0_capped(2 * a - 3, p)
            else:
                v = min(a + s[k] - 1, p)
            if v > out[i]:
                out[i] = v
    return tuple(out)


# ------------------------------------------------------------ progressions


def _residues(A: PointSet) -> list[int]:
    if A.modulus.r != 1:
        raise UsageError("arithmetic-progression tests need r = 1")
    return list(_iter_bits(A.bits))


def ap_differences(A: PointSet) -> set[int]:
    """Differences d in [1, (p-1)/2] for which A is an arithmetic progression.

    A k-set with k < p is a progression of difference d iff exactly k - 1 of
    its points x have x + d in A; d and -d describe the same progression.
    """
    p = A.modulus.p
    xs = _residues(A)
    k = len(xs)
    if k < 2:
        raise UsageError("progression differences need at least 2 points")
    members = set(xs)
    diffs = set()
    for d in range(1, (p - 1) // 2 + 1):
        if k == p or sum((x + d) % p in members for x in xs) == k - 1:
            diffs.add(d)
    return diffs


def is_ap_pair(A: PointSet, B: PointSet) -> int | None:
    """Smallest normalized common difference of two progressions, or None."""
    A._same(B)
    common = ap_differences(A) & ap_differences(B)
    return min(common) if common else None


def vosper_bound(A: PointSet, B: PointSet) -> BoundValue:
    """CD, strengthened by one when (A, B) is not a progression pair with room below p - 2.

    Only the direction "not progressions with a common difference and
    |A| + |B| - 1 <= p - 2 implies |A + B| >= |A| + |B|" is used.
    """
    p = A.modulus.p
    a, b = A.card, B.card
    if a >= 2 and b >= 2 and a + b - 1 <= p - 2 and is_ap_pair(A, B) is None:
        return BoundValue(a + b, "VOSPER")
    return cd_bound(a, b, p)
