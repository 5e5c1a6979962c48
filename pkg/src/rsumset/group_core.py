"""Arithmetic in Z_p^r, its order-p subgroups, and their cosets.

Points are addressed by a flat index: coords[0] + p*coords[1] + p^2*coords[2] + ...
Everything downstream (bit-vectors, coset masks, lookup tables) uses that index.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

# bit-vector addressing limit for p^r
MAX_POINTS = 1 << 20


class UsageError(ValueError):
    """Raised when an operation is called outside its contract."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Modulus:
    """The group Z_p^r for an odd prime p."""

    p: int
    r: int = 2

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or not isinstance(self.r, int):
            raise UsageError("p and r must be integers")
        if not is_prime(self.p):
            raise UsageError(f"{self.p} is not prime")
        if self.p == 2:
            raise UsageError("p = 2 is not supported")
        if self.r < 1:
            raise UsageError("rank r must be >= 1")
        if self.p ** self.r > MAX_POINTS:
            raise UsageError(f"p^r = {self.p ** self.r} exceeds {MAX_POINTS}")

    @property
    def size(self) -> int:
        return self.p ** self.r

    def encode(self, coords: Sequence[int]) -> int:
        if len(coords) != self.r:
            raise UsageError(f"expected {self.r} coordinates, got {len(coords)}")
        idx = 0
        for c in reversed(coords):
            idx = idx * self.p + (c % self.p)
        return idx

    def decode(self, index: int) -> tuple[int, ...]:
        return _decode_table(self.p, self.r)[index]

    def element(self, *coords: int) -> "GroupElement":
        if len(coords) == 1 and not isinstance(coords[0], int):
            coords = tuple(coords[0])
        return GroupElement(self, tuple(c % self.p for c in coords))

    def from_index(self, index: int) -> "GroupElement":
        if not 0 <= index < self.size:
            raise UsageError(f"index {index} out of range for Z_{self.p}^{self.r}")
        return GroupElement(self, self.decode(index))

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.r)

    def elements(self) -> Iterator["GroupElement"]:
        for i in range(self.size):
            yield GroupElement(self, self.decode(i))

    def __str__(self) -> str:
        return f"Z_{self.p}^{self.r}"


@lru_cache(maxsize=None)
def _decode_table(p: int, r: int) -> tuple[tuple[int, ...], ...]:
    out = []
    for idx in range(p ** r):
        coords = []
        x = idx
        for _ in range(r):
            coords.append(x % p)
            x //= p
        out.append(tuple(coords))
    return tuple(out)


@dataclass(frozen=True)
class GroupElement:
    modulus: Modulus
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coords) != self.modulus.r:
            raise UsageError("coordinate count does not match the rank")
        if any(not 0 <= c < self.modulus.p for c in self.coords):
            raise UsageError(f"coordinates {self.coords} not reduced mod {self.modulus.p}")

    @property
    def index(self) -> int:
        return self.modulus.encode(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def _check(self, other: "GroupElement") -> None:
        if not isinstance(other, GroupElement):
            raise TypeError(f"cannot combine GroupElement with {type(other).__name__}")
        if other.modulus != self.modulus:
            raise UsageError(f"modulus mismatch: {self.modulus} vs {other.modulus}")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._check(other)
        p = self.modulus.p
        return GroupElement(self.modulus, tuple((a + b) % p for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "GroupElement":
        p = self.modulus.p
        return GroupElement(self.modulus, tuple((-a) % p for a in self.coords))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def __mul__(self, k: int) -> "GroupElement":
        p = self.modulus.p
        return GroupElement(self.modulus, tuple((k * a) % p for a in self.coords))

    __rmul__ = __mul__

    def __lt__(self, other: "GroupElement") -> bool:
        return self.coords < other.coords

    def __repr__(self) -> str:
        return f"({', '.join(map(str, self.coords))})"


def add(x: GroupElement, y: GroupElement) -> GroupElement:
    return x + y


def _normalize_generator(coords: Sequence[int], p: int) -> tuple[int, ...]:
    """Scale so the first nonzero coordinate is 1."""
    lead = next(c for c in coords if c % p)
    inv = pow(lead, -1, p)
    return tuple((c * inv) % p for c in coords)


@dataclass(frozen=True)
class Subgroup:
    """The cyclic subgroup <generator> of order p.

    The generator is stored normalized (first nonzero coordinate 1), so two
    Subgroup values compare equal iff they have the same members.
    """

    modulus: Modulus
    generator: tuple[int, ...]

    def __post_init__(self) -> None:
        p = self.modulus.p
        if len(self.generator) != self.modulus.r:
            raise UsageError("generator has the wrong number of coordinates")
        if not any(c % p for c in self.generator):
            raise UsageError("the zero element does not generate an order-p subgroup")
        object.__setattr__(self, "generator", _normalize_generator(self.generator, p))

    @classmethod
    def generated_by(cls, g: GroupElement) -> "Subgroup":
        return cls(g.modulus, g.coords)

    @cached_property
    def members(self) -> frozenset[GroupElement]:
        g = GroupElement(self.modulus, self.generator)
        return frozenset(g * k for k in range(self.modulus.p))

    def __contains__(self, x: GroupElement) -> bool:
        return x in self.members

    @cached_property
    def functional(self) -> tuple[int, ...]:
        """Coefficients of the coset-labelling homomorphism Z_p^2 -> Z_p.

        It vanishes on the subgroup and takes the value 1 on the
        lexicographically smallest element outside it.
        """
        M = self.modulus
        if M.r != 2:
            raise UsageError("coset labelling by Z_p needs r = 2 (H must have index p)")
        p = M.p
        g0, g1 = self.generator
        base = (g1 % p, (-g0) % p)  # x -> g1*x0 - g0*x1 kills the generator
        comp = min(x.coords for x in M.elements() if x not in self.members)
        val = (base[0] * comp[0] + base[1] * comp[1]) % p
        scale = pow(val, -1, p)
        return ((base[0] * scale) % p, (base[1] * scale) % p)

    @cached_property
    def complement(self) -> GroupElement:
        """Smallest element (coordinate order) outside the subgroup; it labels coset 1."""
        return min((x for x in self.modulus.elements() if x not in self.members), key=lambda e: e.coords)

    @cached_property
    def label_table(self) -> tuple[int, ...]:
        """coset label of every flat index."""
        p = self.modulus.p
        f0, f1 = self.functional
        return tuple((f0 * c[0] + f1 * c[1]) % p for c in _decode_table(p, self.modulus.r))

    @cached_property
    def coset_masks(self) -> tuple[int, ...]:
        """Bit mask of each coset H_0, ..., H_{p-1} over flat indices."""
        masks = [0] * self.modulus.p
        for idx, lab in enumerate(self.label_table):
            masks[lab] |= 1 << idx
        return tuple(masks)

    def coset(self, i: int) -> frozenset[GroupElement]:
        i %= self.modulus.p
        return frozenset(self.modulus.from_index(k) for k, lab in enumerate(self.label_table) if lab == i)

    def __repr__(self) -> str:
        return f"<{', '.join(map(str, self.generator))}>"


def coset_index(x: GroupElement, H: Subgroup) -> int:
    """Label i with x in H_i; labels satisfy H_i + H_j = H_{i+j}."""
    if x.modulus != H.modulus:
        raise UsageError(f"modulus mismatch: {x.modulus} vs {H.modulus}")
    if H.modulus.r < 2:
        raise UsageError("H would be the whole group; no proper nontrivial subgroup exists for r = 1")
    f = H.functional
    return sum(a * b for a, b in zip(f, x.coords)) % H.modulus.p


def all_subgroups(M: Modulus) -> list[Subgroup]:
    """The p + 1 order-p subgroups of Z_p^2, ordered by normalized generator."""
    if M.r != 2:
        raise UsageError("all_subgroups is only supported for r = 2")
    gens = [(0, 1)] + [(1, t) for t in range(M.p)]
    return [Subgroup(M, g) for g in gens]


def elements_from_indices(M: Modulus, indices: Iterable[int]) -> list[GroupElement]:
    return [M.from_index(i) for i in indices]
