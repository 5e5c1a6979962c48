"""Structured families of subsets of Z_p^2.

* the mu-sequence family: A_0 = {0, d, 2d} and A_i = {a_i, a_i + d} with
  a_{i+1} = a_i + a_1 + mu_{i+1} d, the near-extremal shape of Case 1A;
* the two extremal templates: a coset plus one point (|A| = p + 1), and two
  cosets plus one point whose coset labels form a 3-term progression
  (|A| = 2p + 1).
"""
from __future__ import annotations

import csv
import enum
import io
import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .group_core import GroupElement, Modulus, Subgroup, UsageError, all_subgroups, coset_index
from .profiles import raw_profile
from .setops import PointSet, double_restricted


@dataclass(frozen=True)
class MuSequence:
    """Parameters (d, a_1, mu_2..mu_{p-1}) of one set in the mu family."""

    p: int
    d: GroupElement
    a1: GroupElement
    mu: tuple[int, ...]

    def __post_init__(self) -> None:
        p = self.p
        if self.d.modulus != Modulus(p, 2) or self.a1.modulus != self.d.modulus:
            raise UsageError("d and a1 must live in Z_p^2")
        if self.d.is_zero():
            raise UsageError("d must be nonzero")
        if len(self.mu) != p - 2:
            raise UsageError(f"need mu_2..mu_{p - 1} ({p - 2} values)")
        if self.mu[0] not in (-2, -1, 0, 1) or any(x not in (0, 1) for x in self.mu[1:]):
            raise UsageError("mu_2 must lie in {-2,-1,0,1} and the rest in {0,1}")
        if sum(self.mu) != 1:
            raise UsageError("the mu values must sum to exactly 1")
        if coset_index(self.a1, self.subgroup) != 1:
            raise UsageError("a1 must lie in coset H_1 of H = <d>")

    @property
    def subgroup(self) -> Subgroup:
        return Subgroup.generated_by(self.d)

    def points(self) -> list[GroupElement]:
        """a_1, ..., a_{p-1}."""
        out = [self.a1]
        for k in range(2, self.p):
            out.append(out[-1] + self.a1 + self.d * self.mu[k - 2])
        return out


def valid_mu_vectors(p: int) -> list[tuple[int, ...]]:
    """All (mu_2, ..., mu_{p-1}) with the allowed ranges and sum 1."""
    out = []
    for mu2 in (-2, -1, 0, 1):
        ones = 1 - mu2
        if ones > p - 3:
            continue
        for pos in itertools.combinations(range(p - 3), ones):
            rest = [0] * (p - 3)
            for k in pos:
                rest[k] = 1
            out.append((mu2, *rest))
    return sorted(out)


def build_mu_set(seq: MuSequence) -> PointSet:
    d = seq.d
    zero = d.modulus.zero()
    pts = [zero, d, d * 2]
    for a in seq.points():
        pts.extend((a, a + d))
    A = PointSet.from_elements(d.modulus, pts)
    if A.card != 2 * seq.p + 1:
        raise UsageError("mu construction produced colliding points")
    return A


def iter_mu_sequences(p: int, H: Subgroup | None = None) -> Iterator[MuSequence]:
    """Every valid (d, a_1, mu) with d in H (default: the first subgroup) and a_1 in H_1."""
    M = Modulus(p, 2)
    H = H or all_subgroups(M)[0]
    gen = M.element(*H.generator)
    ds = [gen * k for k in range(1, p)]
    mus = valid_mu_vectors(p)
    for d in ds:
        Hd = Subgroup.generated_by(d)
        a1s = sorted((x for x in M.elements() if coset_index(x, Hd) == 1), key=lambda e: e.coords)
        for a1 in a1s:
            for mu in mus:
                yield MuSequence(p, d, a1, mu)


MU_SWEEP_FIELDS = ["p", "d", "a1", "mu", "value", "sum_mu", "a1_plus_last_is_d", "pass_4p"]


def mu_sweep(p: int) -> list[dict]:
    """One row per mu-family member with |2^A| and the 4p threshold check."""
    rows = []
    for seq in iter_mu_sequences(p):
        A = build_mu_set(seq)
        pts = seq.points()
        rows.append(
            {
                "p": p,
                "d": " ".join(map(str, seq.d.coords)),
                "a1": " ".join(map(str, seq.a1.coords)),
                "mu": " ".join(map(str, seq.mu)),
                "value": double_restricted(A).card,
                "sum_mu": sum(seq.mu),
                "a1_plus_last_is_d": (pts[0] + pts[-1]) == seq.d,
                "pass_4p": double_restricted(A).card >= 4 * p,
            }
        )
    return rows


def rows_to_csv(rows: Sequence[dict], fields: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(fields), lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: row[k] for k in fields})
    return buf.getvalue()


# ------------------------------------------------- mu-shape structural claims


@dataclass
class Lemma213Report:
    value: int
    hypothesis: bool  # |2^A| <= 4p - 1
    claims: dict[int, bool]
    failures: dict[int, list] = field(default_factory=dict)

    @property
    def implication_holds(self) -> bool:
        return not self.hypothesis or all(self.claims.values())


def check_lemma_2_13(A: PointSet, H: Subgroup, d: GroupElement, double: PointSet | None = None) -> Lemma213Report:
    """Evaluate the five structural claims for a set of the mu shape.

    `double` overrides the computed 2^A; it exists so tests can feed the
    checker a corrupted sumset.
    """
    M = A.modulus
    p = M.p
    if M.r != 2 or H.modulus != M or d.modulus != M:
        raise UsageError("need A, H, d over the same Z_p^2")
    if d.is_zero() or d not in H:
        raise UsageError("d must be a nonzero element of H")
    if raw_profile(A, H) != (3,) + (2,) * (p - 1):
        raise UsageError("A must meet H_0 in 3 points and every other coset in 2")
    zero = M.zero()
    blocks = [[x for x in A if coset_index(x, H) == i] for i in range(p)]
    if set(blocks[0]) != {zero, d, d * 2}:
        raise UsageError("A_0 must be {0, d, 2d}")
    a = {}
    for i in range(1, p):
        u, v = blocks[i]
        if v == u + d:
            a[i] = u
        elif u == v + d:
            a[i] = v
        else:
            raise UsageError(f"A_{i} is not of the form {{a, a + d}}")

    S = double if double is not None else double_restricted(A)
    value = S.card
    B = [{x for x in S if coset_index(x, H) == i} for i in range(p)]
    claims: dict[int, bool] = {}
    failures: dict[int, list] = {}

    bad = [i for i in range(1, p) if B[i] != {a[i] + d * k for k in range(4)}]
    claims[1], failures[1] = not bad, bad

    bad = []
    for i in range(1, p):
        for j in range(1, p):
            if j == i or (i - j) % p == 0:
                continue
            if a[j] + a[(i - j) % p] not in (a[i], a[i] + d):
                bad.append((i, j))
    claims[2], failures[2] = not bad, bad

    bad = [i for i in range(1, p) if not any(a[(2 * i) % p] == a[i] * 2 + d * t for t in (-2, -1, 0, 1))]
    claims[3], failures[3] = not bad, bad

    claims[4] = B[0] == {d, d * 2, d * 3}
    failures[4] = [] if claims[4] else sorted(B[0])

    bad = [i for i in range(1, p) if a[i] + a[(-i) % p] != d]
    claims[5], failures[5] = not bad, bad

    return Lemma213Report(value, value <= 4 * p - 1, claims, {k: v for k, v in failures.items() if v})


# ---------------------------------------------------------------- templates


class TemplateKind(enum.Enum):
    EK_P_PLUS_1 = "ek"
    CONJ_4_3 = "conj43"


def _is_three_term_ap(labels: set[int], p: int) -> bool:
    if len(labels) != 3:
        return False
    for d in range(1, (p - 1) // 2 + 1):
        for x in labels:
            if {x, (x + d) % p, (x + 2 * d) % p} == labels:
                return True
    return False


@dataclass(frozen=True)
class ExtremalTemplate:
    kind: TemplateKind
    subgroup: Subgroup
    cosets: tuple[int, ...]
    extra: GroupElement

    @classmethod
    def ek(cls, M: Modulus, subgroup: Subgroup | None = None, coset: int = 0, extra: GroupElement | None = None):
        Z = subgroup or all_subgroups(M)[1]
        extra = extra if extra is not None else _first_in_coset(Z, coset + 1)
        return cls(TemplateKind.EK_P_PLUS_1, Z, (coset,), extra)

    @classmethod
    def conj43(cls, M: Modulus, subgroup: Subgroup | None = None, cosets=(0, 1), extra: GroupElement | None = None):
        Z = subgroup or all_subgroups(M)[1]
        if extra is None:
            c0, c1 = cosets
            extra = _first_in_coset(Z, 2 * c1 - c0)
        return cls(TemplateKind.CONJ_4_3, Z, tuple(cosets), extra)

    @property
    def modulus(self) -> Modulus:
        return self.subgroup.modulus


def _first_in_coset(Z: Subgroup, i: int) -> GroupElement:
    return min(Z.coset(i % Z.modulus.p), key=lambda e: e.coords)


def build_extremal(template: ExtremalTemplate) -> PointSet:
    Z = template.subgroup
    M = Z.modulus
    p = M.p
    cosets = tuple(c % p for c in template.cosets)
    want = 1 if template.kind is TemplateKind.EK_P_PLUS_1 else 2
    if len(set(cosets)) != want:
        raise UsageError(f"{template.kind.value} template needs {want} distinct cosets")
    label = coset_index(template.extra, Z)
    if label in cosets:
        raise UsageError("the extra point lies inside one of the named cosets")
    if template.kind is TemplateKind.CONJ_4_3 and not _is_three_term_ap({*cosets, label}, p):
        raise UsageError("coset labels of the template do not form a 3-term progression")
    bits = 0
    for c in cosets:
        bits |= Z.coset_masks[c]
    bits |= 1 << template.extra.index
    return PointSet(M, bits)


def matches_conjecture_4_3(A: PointSet) -> tuple[Subgroup, GroupElement] | None:
    """(Z, a) with A - {a} a union of two Z-cosets and A's coset labels a 3-term progression."""
    M = A.modulus
    p = M.p
    if M.r != 2 or A.card != 2 * p + 1:
        raise UsageError("needs |A| = 2p + 1 in Z_p^2")
    for Z in all_subgroups(M):
        sizes = raw_profile(A, Z)
        full = [i for i in range(p) if sizes[i] == p]
        single = [i for i in range(p) if sizes[i] == 1]
        if len(full) != 2 or len(single) != 1:
            continue
        if not _is_three_term_ap({*full, *single}, p):
            continue
        a_bits = A.bits & Z.coset_masks[single[0]]
        return Z, M.from_index(a_bits.bit_length() - 1)
    return None


def matches_theorem_4_2(A: PointSet) -> tuple[Subgroup, GroupElement] | None:
    """(Z, a) with A - {a} a single coset of Z, or None."""
    M = A.modulus
    p = M.p
    if M.r != 2 or A.card != p + 1:
        return None
    for Z in all_subgroups(M):
        sizes = raw_profile(A, Z)
        if sorted(sizes)[-2:] == [1, p] and sizes.count(0) == p - 2:
            lone = sizes.index(1)
            return Z, M.from_index((A.bits & Z.coset_masks[lone]).bit_length() - 1)
    return None
