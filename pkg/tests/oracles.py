"""Slow reference implementations, independent of the package internals.

Points are flat indices x0 + p*x1 + p^2*x2 + ...; coordinates are decoded
here with divmod rather than through the library.
"""
from __future__ import annotations

import itertools
from fractions import Fraction


def decode(i: int, p: int, r: int) -> tuple[int, ...]:
    out = []
    for _ in range(r):
        i, c = divmod(i, p)
        out.append(c)
    return tuple(out)


def encode(c, p: int) -> int:
    return sum(x * p**k for k, x in enumerate(c))


def add(i: int, j: int, p: int, r: int) -> int:
    a, b = decode(i, p, r), decode(j, p, r)
    return encode([(x + y) % p for x, y in zip(a, b)], p)


def naive_sumset(A, B, p: int, r: int, restricted: bool = False) -> set[int]:
    out = set()
    for a in A:
        for b in B:
            if restricted and a == b:
                continue
            out.add(add(a, b, p, r))
    return out


def naive_double(A, p: int, r: int) -> int:
    return len(naive_sumset(A, A, p, r, restricted=True))


def naive_rho(p: int, r: int, m: int) -> int:
    return min(naive_double(A, p, r) for A in itertools.combinations(range(p**r), m))


def affine_maps(p: int):
    """Every x -> Lx + t on Z_p^2 as a tuple permutation of flat indices."""
    pts = [decode(i, p, 2) for i in range(p * p)]
    for a, b, c, d in itertools.product(range(p), repeat=4):
        if (a * d - b * c) % p == 0:
            continue
        for t0, t1 in itertools.product(range(p), repeat=2):
            yield tuple(encode(((a * x + b * y + t0) % p, (c * x + d * y + t1) % p), p) for x, y in pts)


def _fixed_subsets(perm, k: int) -> int:
    """k-subsets fixed by the permutation: unions of whole cycles of total size k."""
    seen = [False] * len(perm)
    lens = []
    for s in range(len(perm)):
        if seen[s]:
            continue
        n, x = 0, s
        while not seen[x]:
            seen[x] = True
            x = perm[x]
            n += 1
        lens.append(n)
    ways = [1] + [0] * k
    for L in lens:
        for t in range(k, L - 1, -1):
            ways[t] += ways[t - L]
    return ways[k]


def burnside_orbit_count(p: int, k: int) -> int:
    """Number of AGL(2, p)-orbits on k-subsets of Z_p^2."""
    total, count = 0, 0
    for perm in affine_maps(p):
        total += _fixed_subsets(perm, k)
        count += 1
    q = Fraction(total, count)
    assert q.denominator == 1
    return int(q)


def telescoping_sums(D) -> tuple[int, int]:
    """(sum_w w*D_w, sum_w D'_w) with D'_w = sum_{v >= w} D_v; D is indexed from w = 1."""
    lhs = sum((w + 1) * d for w, d in enumerate(D))
    rhs = sum(sum(D[w:]) for w in range(len(D)))
    return lhs, rhs


def naive_sumset_np(A, B, p: int, r: int, restricted: bool = False) -> set[int]:
    """Same double loop as naive_sumset, vectorized over the |A| x |B| grid."""
    import numpy as np

    A = np.asarray(sorted(A), dtype=np.int64)
    B = np.asarray(sorted(B), dtype=np.int64)
    if A.size == 0 or B.size == 0:
        return set()
    total = np.zeros((A.size, B.size), dtype=np.int64)
    a, b = A.copy(), B.copy()
    for k in range(r):
        a, ca = np.divmod(a, p)
        b, cb = np.divmod(b, p)
        total += ((ca[:, None] + cb[None, :]) % p) * p**k
    if restricted:
        total = total[A[:, None] != B[None, :]]
    return set(np.unique(total).tolist())
