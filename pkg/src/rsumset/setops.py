"""Subsets of Z_p^r as bit-vectors.

A PointSet wraps a Python int whose bit i is the point with flat index i.
Translation by g rotates each coordinate "digit" of the index by g's
coordinate; on the packed integer this is two masked shifts per nonzero
coordinate, so a sumset A + B costs |B| translations of A.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .group_core import GroupElement, Modulus, UsageError, _decode_table

# entries in the affine permutation table (|AGL| * p^r); p = 7, r = 2 needs ~4.8e6
MAX_AFFINE_TABLE = 20_000_000


class SetFormatError(ValueError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        prefix = f"line {lineno}: " if lineno is not None else ""
        super().__init__(prefix + message)


@lru_cache(maxsize=None)
def _shift_masks(p: int, r: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """masks[k][g] = (lo, hi): points whose k-th coordinate is < p-g, and the rest."""
    n = p ** r
    full = (1 << n) - 1
    decode = _decode_table(p, r)
    out = []
    for k in range(r):
        per_g = [(full, 0)]
        for g in range(1, p):
            lo = 0
            for idx in range(n):
                if decode[idx][k] < p - g:
                    lo |= 1 << idx
            per_g.append((lo, full ^ lo))
        out.append(tuple(per_g))
    return tuple(out)


def _translate_bits(bits: int, coords: Sequence[int], p: int, r: int) -> int:
    masks = _shift_masks(p, r)
    block = 1
    for k in range(r):
        g = coords[k]
        if g:
            lo, hi = masks[k][g]
            bits = ((bits & lo) << (g * block)) | ((bits & hi) >> ((p - g) * block))
        block *= p
    return bits


def _iter_bits(bits: int) -> Iterator[int]:
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


@dataclass(frozen=True)
class PointSet:
    """A subset of Z_p^r. Immutable; cardinality is cached."""

    modulus: Modulus
    bits: int = 0
    card: int = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.bits < 0 or self.bits >> self.modulus.size:
            raise UsageError("bit-vector has bits outside the group")
        object.__setattr__(self, "card", self.bits.bit_count())

    @classmethod
    def from_indices(cls, M: Modulus, indices: Iterable[int]) -> "PointSet":
        bits = 0
        n = M.size
        for i in indices:
            if not 0 <= i < n:
                raise UsageError(f"index {i} out of range for {M}")
            bits |= 1 << i
        return cls(M, bits)

    @classmethod
    def from_elements(cls, M: Modulus, elems: Iterable[GroupElement]) -> "PointSet":
        bits = 0
        for e in elems:
            if e.modulus != M:
                raise UsageError(f"modulus mismatch: {e.modulus} vs {M}")
            bits |= 1 << e.index
        return cls(M, bits)

    @classmethod
    def empty(cls, M: Modulus) -> "PointSet":
        return cls(M, 0)

    @classmethod
    def full(cls, M: Modulus) -> "PointSet":
        return cls(M, (1 << M.size) - 1)

    def __len__(self) -> int:
        return self.card

    def __iter__(self) -> Iterator[GroupElement]:
        M = self.modulus
        for i in _iter_bits(self.bits):
            yield GroupElement(M, M.decode(i))

    def __contains__(self, x: GroupElement) -> bool:
        return x.modulus == self.modulus and bool(self.bits >> x.index & 1)

    def indices(self) -> list[int]:
        return list(_iter_bits(self.bits))

    def _same(self, other: "PointSet") -> None:
        if not isinstance(other, PointSet):
            raise TypeError(f"expected PointSet, got {type(other).__name__}")
        if other.modulus != self.modulus:
            raise UsageError(f"modulus mismatch: {self.modulus} vs {other.modulus}")

    def __or__(self, other: "PointSet") -> "PointSet":
        self._same(other)
        return PointSet(self.modulus, self.bits | other.bits)

    def __and__(self, other: "PointSet") -> "PointSet":
        self._same(other)
        return PointSet(self.modulus, self.bits & other.bits)

    def __sub__(self, other: "PointSet") -> "PointSet":
        self._same(other)
        return PointSet(self.modulus, self.bits & ~other.bits)

    def add_point(self, x: GroupElement) -> "PointSet":
        return PointSet(self.modulus, self.bits | (1 << x.index))

    def remove_point(self, x: GroupElement) -> "PointSet":
        return PointSet(self.modulus, self.bits & ~(1 << x.index))

    def __repr__(self) -> str:
        return f"PointSet({self.modulus}, {self.indices()})"


def sumset(A: PointSet, B: PointSet) -> PointSet:
    A._same(B)
    M = A.modulus
    if A.card > B.card:
        A, B = B, A
    acc = 0
    p, r = M.p, M.r
    decode = _decode_table(p, r)
    for b in _iter_bits(A.bits):
        acc |= _translate_bits(B.bits, decode[b], p, r)
    return PointSet(M, acc)


def restricted_sumset(A: PointSet, B: PointSet) -> PointSet:
    """{a + b : a in A, b in B, a != b}, accumulated as the union over b of (A - {b}) + b."""
    A._same(B)
    M = A.modulus
    p, r = M.p, M.r
    decode = _decode_table(p, r)
    acc = 0
    for b in _iter_bits(B.bits):
        acc |= _translate_bits(A.bits & ~(1 << b), decode[b], p, r)
    return PointSet(M, acc)


def double_restricted(A: PointSet) -> PointSet:
    return restricted_sumset(A, A)


def restricted_size(A: PointSet) -> int:
    return restricted_sumset(A, A).card


def translate(A: PointSet, g: GroupElement) -> PointSet:
    if g.modulus != A.modulus:
        raise UsageError(f"modulus mismatch: {A.modulus} vs {g.modulus}")
    M = A.modulus
    return PointSet(M, _translate_bits(A.bits, g.coords, M.p, M.r))


# ---------------------------------------------------------------- affine maps


def _det_mod(mat: Sequence[Sequence[int]], p: int) -> int:
    a = [[x % p for x in row] for row in mat]
    n = len(a)
    det = 1
    for col in range(n):
        pivot = next((row for row in range(col, n) if a[row][col]), None)
        if pivot is None:
            return 0
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det = det * a[col][col] % p
        inv = pow(a[col][col], -1, p)
        for row in range(col + 1, n):
            f = a[row][col] * inv % p
            if f:
                a[row] = [(x - f * y) % p for x, y in zip(a[row], a[col])]
    return det % p


@dataclass(frozen=True)
class AffineMap:
    """x -> linear @ x + shift over Z_p^r, with an invertible linear part."""

    modulus: Modulus
    linear: tuple[tuple[int, ...], ...]
    shift: tuple[int, ...]

    def __post_init__(self) -> None:
        M = self.modulus
        p = M.p
        lin = tuple(tuple(int(x) % p for x in row) for row in self.linear)
        if len(lin) != M.r or any(len(row) != M.r for row in lin):
            raise UsageError(f"linear part must be {M.r}x{M.r}")
        if _det_mod(lin, p) == 0:
            raise UsageError("linear part is singular mod p")
        if len(self.shift) != M.r:
            raise UsageError("shift has the wrong number of coordinates")
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "shift", tuple(int(x) % p for x in self.shift))

    @classmethod
    def identity(cls, M: Modulus) -> "AffineMap":
        eye = tuple(tuple(int(i == j) for j in range(M.r)) for i in range(M.r))
        return cls(M, eye, (0,) * M.r)

    @classmethod
    def translation(cls, g: GroupElement) -> "AffineMap":
        M = g.modulus
        return cls(M, cls.identity(M).linear, g.coords)

    def __call__(self, x: GroupElement) -> GroupElement:
        p = self.modulus.p
        coords = tuple(
            (sum(a * b for a, b in zip(row, x.coords)) + s) % p for row, s in zip(self.linear, self.shift)
        )
        return GroupElement(self.modulus, coords)

    def compose(self, first: "AffineMap") -> "AffineMap":
        """self o first: apply `first`, then self."""
        if first.modulus != self.modulus:
            raise UsageError("modulus mismatch")
        p = self.modulus.p
        r = self.modulus.r
        lin = tuple(
            tuple(sum(self.linear[i][k] * first.linear[k][j] for k in range(r)) % p for j in range(r))
            for i in range(r)
        )
        shift = tuple(
            (sum(self.linear[i][k] * first.shift[k] for k in range(r)) + self.shift[i]) % p for i in range(r)
        )
        return AffineMap(self.modulus, lin, shift)

    def permutation(self) -> tuple[int, ...]:
        M = self.modulus
        return tuple(self(M.from_index(i)).index for i in range(M.size))


def apply_affine(A: PointSet, T: AffineMap) -> PointSet:
    if T.modulus != A.modulus:
        raise UsageError(f"modulus mismatch: {A.modulus} vs {T.modulus}")
    perm = T.permutation()
    bits = 0
    for i in _iter_bits(A.bits):
        bits |= 1 << perm[i]
    return PointSet(A.modulus, bits)


# ------------------------------------------------------- canonical forms


def general_linear_group(p: int, r: int) -> list[tuple[tuple[int, ...], ...]]:
    """All invertible r x r matrices over F_p (r <= 2)."""
    if r > 2:
        raise UsageError("affine orbit enumeration is only supported for r <= 2")
    mats = []
    for entries in itertools.product(range(p), repeat=r * r):
        mat = tuple(tuple(entries[i * r:(i + 1) * r]) for i in range(r))
        if _det_mod(mat, p):
            mats.append(mat)
    return mats


@lru_cache(maxsize=8)
def affine_permutations(p: int, r: int) -> np.ndarray:
    """Every element of AGL(r, p) as a permutation of flat indices, shape (|AGL|, p^r)."""
    n = p ** r
    mats = general_linear_group(p, r)
    if len(mats) * n * n > MAX_AFFINE_TABLE:
        raise UsageError(f"AGL({r},{p}) permutation table too large to build")
    coords = np.array(_decode_table(p, r), dtype=np.int64)  # (n, r)
    place = p ** np.arange(r, dtype=np.int64)
    lin = np.einsum("gij,nj->gni", np.array(mats, dtype=np.int64), coords) % p  # (G, n, r)
    dtype = np.int16 if n < 2 ** 15 else np.int32
    blocks = []
    for shift in coords:  # translations in flat-index order
        blocks.append((((lin + shift) % p) * place).sum(axis=-1).astype(dtype))
    return np.concatenate(blocks, axis=0)


def _orbit_values(A: PointSet) -> np.ndarray:
    M = A.modulus
    if M.size > 64:
        raise UsageError("packed orbit values need p^r <= 64")
    perms = affine_permutations(M.p, M.r)
    weights = np.left_shift(np.uint64(1), np.arange(M.size, dtype=np.uint64))
    idx = np.array(A.indices(), dtype=np.int64)
    if idx.size == 0:
        return np.zeros(1, dtype=np.uint64)
    return weights[perms[:, idx]].sum(axis=1, dtype=np.uint64)


def orbit_bits(A: PointSet) -> set[int]:
    """All bit-vectors in the affine orbit of A (p^r <= 64)."""
    return set(int(v) for v in np.unique(_orbit_values(A)))


def canonical_form(A: PointSet) -> PointSet:
    """Least image of A under the affine group, comparing bit-vectors as integers.

    Comparing as integers means bit i weighs 2^i, so the winner keeps its
    points at the smallest flat indices it can.
    """
    M = A.modulus
    if M.r > 2:
        raise UsageError("canonical_form supports r <= 2")
    if A.card == 0:
        return A
    if M.size <= 64:
        return PointSet(M, int(_orbit_values(A).min()))
    perms = affine_permutations(M.p, M.r)
    idx = np.array(A.indices(), dtype=np.int64)
    imgs = np.sort(perms[:, idx], axis=1)[:, ::-1]
    # integer order on equal-size sets == lexicographic order of descending index lists
    best = np.lexsort(imgs.T[::-1])[0]
    return PointSet.from_indices(M, imgs[best].tolist())


def canonical_bits(A: PointSet) -> int:
    return canonical_form(A).bits


# ------------------------------------------------------------ serialization


def dumps_text(A: PointSet) -> str:
    M = A.modulus
    lines = [f"{M.p} {M.r}"] + [str(i) for i in A.indices()]
    return "\n".join(lines) + "\n"


def loads_text(text: str) -> PointSet:
    header = None
    indices = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            parts = line.split()
            if len(parts) != 2:
                raise SetFormatError("expected header 'p r'", lineno)
            try:
                header = Modulus(int(parts[0]), int(parts[1]))
            except ValueError as exc:
                raise SetFormatError(f"bad header: {exc}", lineno) from None
            continue
        try:
            idx = int(line)
        except ValueError:
            raise SetFormatError(f"not an integer index: {line!r}", lineno) from None
        if not 0 <= idx < header.size:
            raise SetFormatError(f"index {idx} out of range for {header}", lineno)
        indices.append(idx)
    if header is None:
        raise SetFormatError("missing header 'p r'")
    return PointSet.from_indices(header, indices)


def dumps_binary(A: PointSet) -> bytes:
    nbytes = (A.modulus.size + 7) // 8
    return A.bits.to_bytes(nbytes, "little")


def loads_binary(data: bytes, M: Modulus) -> PointSet:
    nbytes = (M.size + 7) // 8
    if len(data) != nbytes:
        raise SetFormatError(f"expected {nbytes} bytes for {M}, got {len(data)}")
    return PointSet(M, int.from_bytes(data, "little"))


def write_set(path: str | Path, A: PointSet) -> None:
    path = Path(path)
    if path.suffix == ".pset":
        path.write_bytes(dumps_binary(A))
    else:
        path.write_text(dumps_text(A))


def read_set(path: str | Path, modulus: Modulus | None = None) -> PointSet:
    path = Path(path)
    if path.suffix == ".pset":
        if modulus is None:
            raise UsageError("binary .pset files carry no header; pass the modulus")
        return loads_binary(path.read_bytes(), modulus)
    A = loads_text(path.read_text())
    if modulus is not None and A.modulus != modulus:
        raise UsageError(f"file is over {A.modulus}, expected {modulus}")
    return A
