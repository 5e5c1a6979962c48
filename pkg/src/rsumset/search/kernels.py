"""Vectorized |2^A| over many sets at once.

Sets are rows of an (N, m) array of flat indices. For p^r <= 64 each row's
restricted sumset is packed into one uint64; otherwise a boolean (N, p^r)
hit matrix is used.
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from math import comb
from typing import Iterator

import numpy as np

from ..group_core import Modulus, _decode_table


@lru_cache(maxsize=None)
def _add_table(p: int, r: int) -> np.ndarray:
    coords = np.array(_decode_table(p, r), dtype=np.int64)
    place = p ** np.arange(r, dtype=np.int64)
    sums = (coords[:, None, :] + coords[None, :, :]) % p
    table = (sums * place).sum(axis=-1)
    table.flags.writeable = False
    return table


def add_table(M: Modulus) -> np.ndarray:
    """(n, n) table of flat-index sums."""
    return _add_table(M.p, M.r)


def batch_restricted_masks(rows: np.ndarray, M: Modulus) -> np.ndarray:
    """2^A of every row as a uint64 bit mask (p^r <= 64)."""
    rows = np.asarray(rows).astype(np.intp, copy=False)
    N, m = rows.shape
    if M.size > 64:
        raise ValueError("packed kernel needs p^r <= 64")
    table = add_table(M)
    one = np.uint64(1)
    mask = np.zeros(N, dtype=np.uint64)
    for i in range(m):
        ci = rows[:, i]
        for j in range(i + 1, m):
            mask |= np.left_shift(one, table[ci, rows[:, j]].astype(np.uint64))
    return mask


def batch_restricted_sizes(rows: np.ndarray, M: Modulus, packed: bool | None = None) -> np.ndarray:
    """|2^A| for every row of `rows` (rows hold distinct flat indices)."""
    rows = np.asarray(rows)
    N, m = rows.shape
    n = M.size
    if packed is None:
        packed = n <= 64
    if packed:
        return np.bitwise_count(batch_restricted_masks(rows, M)).astype(np.int64)
    table = add_table(M)
    rows = rows.astype(np.intp, copy=False)
    hits = np.zeros((N, n), dtype=bool)
    ar = np.arange(N)
    for i in range(m):
        ci = rows[:, i]
        for j in range(i + 1, m):
            hits[ar, table[ci, rows[:, j]]] = True
    return hits.sum(axis=1)


def combination_chunks(n: int, m: int, chunk: int = 250_000, start: int = 0) -> Iterator[np.ndarray]:
    """All m-subsets of range(n) in lexicographic order, as int16 arrays of up to `chunk` rows."""
    it = itertools.combinations(range(n), m)
    if start:
        it = itertools.islice(it, start, None)
    if m == 0:
        yield np.zeros((1, 0), dtype=np.int16)
        return
    while True:
        flat = np.fromiter(
            itertools.chain.from_iterable(itertools.islice(it, chunk)), dtype=np.int16, count=-1
        )
        if flat.size == 0:
            return
        yield flat.reshape(-1, m)


def count_combinations(n: int, m: int) -> int:
    return comb(n, m)


def random_subsets(rng: np.random.Generator, n: int, m: int, count: int) -> np.ndarray:
    """`count` uniformly random m-subsets of range(n), one per row."""
    if m == 0:
        return np.zeros((count, 0), dtype=np.int64)
    keys = rng.random((count, n))
    return np.argpartition(keys, m - 1, axis=1)[:, :m] if m < n else np.tile(np.arange(n), (count, 1))


def bits_of_rows(rows: np.ndarray) -> list[int]:
    """Python-int bit-vectors for index rows."""
    out = []
    for row in rows.tolist():
        b = 0
        for i in row:
            b |= 1 << i
        out.append(b)
    return out
