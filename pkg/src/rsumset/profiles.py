"""Coset profiles and admissible lower bounds on |2^A| computed from them.

Fix an order-p subgroup H of Z_p^2 with cosets H_0..H_{p-1}. The profile of A
is the vector of |A cap H_i|, rotated so a largest block sits at index 0
(translating A by an element of H_{-alpha} does exactly this and leaves |2^A|
unchanged). Every bound in this module depends on the profile only, so it is
a valid lower bound for every set realizing that profile.

Notation used below:
    a0      size of the largest block (index 0 after rotation)
    m       number of nonzero indices i with A_i nonempty
    n       |A|
    ell, s  in Case 2, blocks with a0 + a_i - 1 >= p, and the remaining nonempty blocks
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .bounds import block_bounds, min0_capped
from .group_core import Subgroup, UsageError
from .setops import PointSet


class CaseTag(enum.Enum):
    CASE_1A = "1A"
    CASE_1B = "1B"
    CASE_2 = "2"


def normalize_sizes(sizes: Sequence[int]) -> tuple[int, ...]:
    """Rotate so a maximal entry is first; ties go to the lexicographically greatest rotation."""
    s = tuple(sizes)
    p = len(s)
    top = max(s)
    return max(s[k:] + s[:k] for k in range(p) if s[k] == top)


@dataclass(frozen=True)
class CosetProfile:
    p: int
    sizes: tuple[int, ...]
    total: int = field(init=False)

    def __post_init__(self) -> None:
        s = tuple(int(x) for x in self.sizes)
        if len(s) != self.p:
            raise UsageError(f"profile needs {self.p} entries, got {len(s)}")
        if any(not 0 <= x <= self.p for x in s):
            raise UsageError("profile entries must lie in [0, p]")
        object.__setattr__(self, "sizes", s)
        object.__setattr__(self, "total", sum(s))
        if s and s[0] != max(s):
            raise UsageError("profile must be rotated so sizes[0] is maximal; use CosetProfile.of")

    @classmethod
    def of(cls, sizes: Sequence[int]) -> "CosetProfile":
        """Build a profile from raw (unrotated) coset sizes."""
        return cls(len(sizes), normalize_sizes(sizes))

    @property
    def a0(self) -> int:
        return self.sizes[0]

    @property
    def m(self) -> int:
        return sum(1 for x in self.sizes[1:] if x)

    def __str__(self) -> str:
        return f"p={self.p} sizes=[{','.join(map(str, self.sizes))}]"


def raw_profile(A: PointSet, H: Subgroup) -> tuple[int, ...]:
    """|A cap H_i| for i = 0..p-1 in the subgroup's own labelling."""
    if A.modulus != H.modulus:
        raise UsageError("modulus mismatch")
    return tuple((A.bits & mask).bit_count() for mask in H.coset_masks)


def profile_of(A: PointSet, H: Subgroup) -> CosetProfile:
    return CosetProfile.of(raw_profile(A, H))


def classify(profile: CosetProfile) -> CaseTag:
    p = profile.p
    if profile.a0 >= (p + 3) // 2:
        return CaseTag.CASE_2
    if profile.m >= (p + 1) // 2:
        return CaseTag.CASE_1A
    return CaseTag.CASE_1B


@dataclass(frozen=True)
class CountVector:
    """counts[w] = number of cosets meeting A in exactly w points, w = 0..p."""

    counts: tuple[int, ...]

    @classmethod
    def of(cls, profile: CosetProfile) -> "CountVector":
        c = [0] * (profile.p + 1)
        for x in profile.sizes:
            c[x] += 1
        return cls(tuple(c))

    @property
    def p(self) -> int:
        return len(self.counts) - 1

    def __getitem__(self, w: int) -> int:
        return self.counts[w] if 0 <= w < len(self.counts) else 0

    @property
    def total(self) -> int:
        return sum(w * c for w, c in enumerate(self.counts))

    @property
    def a0(self) -> int:
        return max(w for w, c in enumerate(self.counts) if c)

    @property
    def m(self) -> int:
        return sum(self.counts[1:]) - 1


@dataclass(frozen=True)
class BoundCertificate:
    value: int
    lemma: str
    inputs: dict = field(default_factory=dict, compare=False)


def render(profile: CosetProfile, cert: BoundCertificate) -> str:
    return f"{profile} case={classify(profile).value} bound={cert.value} lemma={cert.lemma}"


def _index_tail(m: int, p: int) -> int:
    """Cosets outside S_0 guaranteed to meet 2^A.

    The m + 1 nonempty coset indices have at least min0(2m - 1, p) distinct
    restricted pairwise sums (DSH in Z_p); at most m + 1 of them are in S_0.
    """
    return max(0, min0_capped(2 * m - 1, p) - (m + 1))


# ------------------------------------------------------------------ Case 1


def lemma_2_1_bound(profile: CosetProfile) -> BoundCertificate:
    """|2^A| >= (m+2)(a0-1) - 1 + (n - a0) + tail, valid throughout Case 1.

    With n = 2p + 1 this is (m+1)(a0-1) + 2p - 1 + tail. The tail counts
    guaranteed nonempty B_i outside S_0: p - m - 1 in 1A, m - 2 in 1B.
    """
    case = classify(profile)
    if case is CaseTag.CASE_2:
        raise UsageError("lemma_2_1_bound applies to Case 1 only")
    p, a0, m, n = profile.p, profile.a0, profile.m, profile.total
    if n == 0:
        return BoundCertificate(0, "L2.1", {"m": 0, "a0": 0, "tail": 0})
    tail = _index_tail(m, p)
    value = (m + 2) * (a0 - 1) - 1 + (n - a0) + tail
    return BoundCertificate(max(0, value), "L2.1", {"m": m, "a0": a0, "n": n, "tail": tail})


def case1a_dprime_bounds(counts: CountVector) -> BoundCertificate:
    """p + 2*D'_3 + D'_4 + D'_5 for Case 1A profiles with a0 = 3.

    D'_w is the number of cosets with |B_i| >= w; |2^A| = sum_w D'_w.
    D'_1 = p in 1A and D'_2 >= D'_3. The three block counts come from CD/DSH
    on the coset indices of the size-3 and size-2 blocks.
    """
    p = counts.p
    if p < 5:
        raise UsageError("the D' bounds need p >= 5")
    if counts.a0 != 3 or counts.m < (p + 1) // 2:
        raise UsageError("case1a_dprime_bounds needs Case 1A with a0 = 3")
    c1, c2, c3 = counts[1], counts[2], counts[3]
    nonempty = c1 + c2 + c3
    d3 = min0_capped(c3 + nonempty - 1, p) if c3 and nonempty else 0
    d4 = min0_capped(c3 + c2 - 1, p) if c3 and c2 else 0
    d5 = min0_capped(2 * c3 - 3, p)
    # D'_w is nonincreasing in w
    d4 = max(d4, d5)
    d3 = max(d3, d4)
    value = p + 2 * d3 + d4 + d5
    return BoundCertificate(value, "L2.3-2.5-combo", {"C1": c1, "C2": c2, "C3": c3, "D3": d3, "D4": d4, "D5": d5})


def lemma_2_16_bound(profile: CosetProfile) -> BoundCertificate | None:
    """Case 1B with n = 2p + 1, p >= 5: |2^A| >= 4p."""
    p = profile.p
    if classify(profile) is CaseTag.CASE_1B and profile.total == 2 * p + 1 and p >= 5:
        return BoundCertificate(4 * p, "L2.16", {"m": profile.m, "a0": profile.a0})
    return None


# ------------------------------------------------------------------ Case 2


def case2_split(profile: CosetProfile) -> tuple[list[int], list[int]]:
    """(ell-indices, s-indices) among the nonzero nonempty blocks."""
    p, s, a0 = profile.p, profile.sizes, profile.a0
    ells = [i for i in range(1, p) if s[i] and a0 + s[i] - 1 >= p]
    smalls = [i for i in range(1, p) if s[i] and a0 + s[i] - 1 < p]
    return ells, smalls


def _lemma_3_2(profile: CosetProfile) -> BoundCertificate:
    p, a0 = profile.p, profile.a0
    ells, smalls = case2_split(profile)
    ell, s = len(ells), len(smalls)
    tail = _index_tail(ell + s, p)
    value = (ell + 1) * p + s * a0 + tail
    return BoundCertificate(value, "L3.2", {"ell": ell, "s": s, "a0": a0, "tail": tail})


def case2_bound(profile: CosetProfile) -> BoundCertificate:
    """Strongest closed-form Case 2 bound applicable to the profile."""
    if classify(profile) is not CaseTag.CASE_2:
        raise UsageError("case2_bound applies to Case 2 only")
    p, sz, a0, n = profile.p, profile.sizes, profile.a0, profile.total
    ells, smalls = case2_split(profile)
    ell, s = len(ells), len(smalls)
    full = n == 2 * p + 1 and p >= 5
    certs = [_lemma_3_2(profile)]
    inputs = {"ell": ell, "s": s, "a0": a0}
    S0 = {0, *ells, *smalls}

    if ell >= 3:
        certs.append(BoundCertificate(4 * p, "L3.3", inputs))
    elif ell == 2 and s >= 2:
        certs.append(BoundCertificate(3 * p + s * a0, "L3.4", inputs))
    elif ell == 2 and s == 1:
        # beta + S_0 != S_0, so some beta + iota lies outside S_0
        beta = max(ells, key=lambda i: (sz[i], -i))
        extra = 0
        for iota in S0:
            k = (beta + iota) % p
            if k in S0:
                continue
            if iota == beta:
                v = min0_capped(2 * sz[beta] - 3, p)
            else:
                v = min(sz[beta] + sz[iota] - 1, p)
            extra = max(extra, v)
        certs.append(BoundCertificate(3 * p + a0 + extra, "L3.5", {**inputs, "extra": extra}))
    elif ell == 2 and s == 0:
        beta, gamma = ells
        terms = {
            (2 * beta) % p: min0_capped(2 * sz[beta] - 3, p),
            (2 * gamma) % p: min0_capped(2 * sz[gamma] - 3, p),
            (beta + gamma) % p: min(sz[beta] + sz[gamma] - 1, p),
        }
        extra = sum(v for k, v in terms.items() if k not in S0)
        certs.append(BoundCertificate(3 * p + extra, "L3.6", {**inputs, "extra": extra}))
    elif ell == 1:
        beta = ells[0]
        certs.append(
            BoundCertificate(2 * p + s * (a0 - 1) + (n - a0 - sz[beta]), "L3.7", {**inputs, "a_beta": sz[beta]})
        )
        if s == 2 and full:
            certs.append(BoundCertificate(4 * p, "L3.8", inputs))
    elif ell == 0:
        certs.append(BoundCertificate(p + s * (a0 - 1) + (n - a0), "L3.10", inputs))
    return max(certs, key=lambda c: c.value)


# --------------------------------------------------------------- composite


def eq1_sum(profile: CosetProfile) -> BoundCertificate:
    """Sum over i of the per-coset block bound; the B_i partition 2^A."""
    return BoundCertificate(sum(block_bounds(profile.sizes)), "EQ1-SUM")


def certificates(profile: CosetProfile) -> list[BoundCertificate]:
    """Every certificate whose hypotheses the profile satisfies."""
    out = [eq1_sum(profile)]
    if profile.total == 0:
        return out
    case = classify(profile)
    if case is CaseTag.CASE_2:
        out.append(case2_bound(profile))
    else:
        out.append(lemma_2_1_bound(profile))
        counts = CountVector.of(profile)
        if case is CaseTag.CASE_1A and profile.a0 == 3 and profile.p >= 5:
            out.append(case1a_dprime_bounds(counts))
        l216 = lemma_2_16_bound(profile)
        if l216 is not None:
            out.append(l216)
    return out


def profile_lower_bound(profile: CosetProfile) -> BoundCertificate:
    """Maximum over all applicable certificates (ties go to the first listed)."""
    best = None
    for cert in certificates(profile):
        if best is None or cert.value > best.value:
            best = cert
    return best


@lru_cache(maxsize=None)
def _plb_value(sizes: tuple[int, ...]) -> int:
    return profile_lower_bound(CosetProfile(len(sizes), sizes)).value


class CompletionBound:
    """Least profile bound over every way to complete a partial set to n points.

    A partial set with raw coset sizes v can only grow into sets whose sizes
    dominate v entrywise (each entry capped at p), so the minimum of the
    profile bound over those completions is a lower bound on |2^A| for any
    completion. Results are memoized on the rotation-normalized vector.
    """

    def __init__(self, p: int, n: int):
        if n > p * p:
            raise UsageError("more points than Z_p^2 holds")
        self.p = p
        self.n = n
        self._norm: dict[tuple[int, ...], int] = {}
        self._raw: dict[tuple[int, ...], int] = {}

    def __call__(self, raw: tuple[int, ...]) -> int:
        v = self._raw.get(raw)
        if v is None:
            v = self._solve(normalize_sizes(raw))
            self._raw[raw] = v
        return v

    def _solve(self, norm: tuple[int, ...]) -> int:
        v = self._norm.get(norm)
        if v is not None:
            return v
        total = sum(norm)
        if total > self.n:
            raise UsageError("partial set already exceeds the target size")
        if total == self.n:
            v = _plb_value(norm)
        else:
            p = self.p
            v = None
            for i in range(p):
                if norm[i] < p:
                    child = norm[:i] + (norm[i] + 1,) + norm[i + 1:]
                    c = self._solve(normalize_sizes(child))
                    if v is None or c < v:
                        v = c
        self._norm[norm] = v
        return v
