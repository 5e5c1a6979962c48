"""The 2p+1 statement in Z_p^2, the minimizer census, and random sampling."""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field

import numpy as np

from ..group_core import Modulus, UsageError, is_prime
from ..setops import PointSet, restricted_size
from ..structures import ExtremalTemplate, build_extremal, matches_conjecture_4_3, matches_theorem_4_2
from .engine import (
    InfeasibleError,
    SearchConfig,
    Strategy,
    _canonical_supported,
    estimate_work,
    orbit_representatives,
    rho,
)
from .kernels import batch_restricted_sizes, random_subsets


@dataclass
class SampleReport:
    p: int
    r: int
    m: int
    count: int
    seed: int
    min_value: int | None
    below: int  # samples with value < threshold
    threshold: int | None
    example: list[int] = field(default_factory=list)  # one set attaining min_value

    def to_dict(self) -> dict:
        return asdict(self)


def sample_min(p: int, r: int, m: int, count: int, seed: int, threshold: int | None = None,
               chunk: int = 50_000) -> SampleReport:
    """Minimum |2^A| over `count` uniform random m-subsets (reproducible from `seed`)."""
    M = Modulus(p, r)
    if not 0 <= m <= M.size:
        raise UsageError(f"m = {m} outside [0, {M.size}]")
    rng = np.random.default_rng(seed)
    best, example, below, done = None, [], 0, 0
    while done < count:
        k = min(chunk, count - done)
        rows = random_subsets(rng, M.size, m, k)
        vals = batch_restricted_sizes(rows, M)
        i = int(vals.argmin())
        if best is None or vals[i] < best:
            best = int(vals[i])
            example = sorted(int(x) for x in rows[i])
        if threshold is not None:
            below += int((vals < threshold).sum())
        done += k
    return SampleReport(p, r, m, count, seed, best, below, threshold, example)


@dataclass
class TheoremReport:
    p: int
    target: int  # 4p
    attainment_set: list[int]
    attainment_value: int
    method: str
    complete: bool
    coverage: float
    min_found: int | None  # smallest |2^A| the lower-bound search saw (None: nothing below target)
    counterexamples: list[list[int]]
    nodes_visited: int = 0
    pruned_count: int = 0
    sample: SampleReport | None = None
    elapsed: float = 0.0

    @property
    def attainment_ok(self) -> bool:
        return self.attainment_value == self.target

    @property
    def lower_bound_ok(self) -> bool | None:
        """True when proven, False on a counterexample, None when the search was cut short."""
        if self.counterexamples:
            return False
        if self.sample is not None and self.sample.below:
            return False
        return True if self.complete else None

    @property
    def verified(self) -> bool:
        return self.attainment_ok and self.lower_bound_ok is True

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("elapsed")
        d.update(attainment_ok=self.attainment_ok, lower_bound_ok=self.lower_bound_ok, verified=self.verified)
        return d

    def render(self) -> str:
        lines = [
            f"p={self.p}: rho(Z_p^2, {2 * self.p + 1}) = {self.target}?",
            f"  attainment: {'PASS' if self.attainment_ok else 'FAIL'} "
            f"(two cosets plus a point, |2^A| = {self.attainment_value})",
        ]
        lb = self.lower_bound_ok
        status = {True: "PASS", False: "FAIL", None: "PARTIAL"}[lb]
        lines.append(
            f"  lower bound: {status} via {self.method}, complete={str(self.complete).lower()}, "
            f"coverage={100 * self.coverage:.4f}%"
        )
        if self.min_found is not None:
            lines.append(f"  smallest value seen: {self.min_found}")
        if self.sample is not None:
            s = self.sample
            lines.append(f"  sampling: {s.count} random sets (seed {s.seed}), min {s.min_value}, {s.below} below {s.threshold}")
        for c in self.counterexamples[:5]:
            lines.append(f"  counterexample: {' '.join(map(str, c))}")
        lines.append(f"  result: {'PASS' if self.verified else ('FAIL' if lb is False or not self.attainment_ok else 'PARTIAL')}")
        lines.append(f"  runtime: {self.elapsed:.2f}s")
        return "\n".join(lines)


def verify_theorem_1_4(p: int, budget: float | None = None, *, checkpoint: str | None = None,
                       threads: int = 1, samples: int | None = None, seed: int = 0,
                       method: str | None = None) -> TheoremReport:
    """Check rho(Z_p^2, 2p + 1) = 4p.

    Attainment uses the two-cosets-plus-a-point template. The lower bound is
    exhaustive at p = 5, branch and bound (target 4p) at p = 7 with a default
    60 s budget, and random sampling for larger p.
    """
    if not is_prime(p) or p < 5:
        raise UsageError(f"p = {p}: need a prime p >= 5")
    t0 = time.monotonic()
    M = Modulus(p, 2)
    m, target = 2 * p + 1, 4 * p
    A = build_extremal(ExtremalTemplate.conj43(M))
    att = restricted_size(A)
    if method is None:
        method = "exhaustive" if p == 5 else "bnb" if p == 7 else "sample"
    if method not in ("exhaustive", "orbit", "bnb", "sample"):
        raise UsageError(f"unknown method {method!r}")

    complete, coverage, min_found, bad = False, 0.0, None, []
    nodes = pruned = 0
    if method == "sample":
        samples = samples or 1_000_000
    else:
        if method == "bnb":
            cfg = SearchConfig(p, 2, m, Strategy.BNB, target=target,
                               time_budget=60.0 if budget is None else budget,
                               checkpoint_path=checkpoint, thread_count=threads)
        else:
            cfg = SearchConfig(p, 2, m, Strategy(method), time_budget=budget,
                               checkpoint_path=checkpoint if method == "orbit" else None, thread_count=threads)
        res = rho(cfg)
        complete, coverage = res.complete, res.coverage
        min_found = res.best_value
        nodes, pruned = res.nodes_visited, res.pruned_count
        if res.best_value is not None and res.best_value < target:
            bad = [w.indices() for w in res.witnesses]
    sample = sample_min(p, 2, m, samples, seed, threshold=target) if samples else None
    return TheoremReport(p, target, A.indices(), att, method, complete, coverage, min_found, bad,
                         nodes, pruned, sample, time.monotonic() - t0)


# ------------------------------------------------------------------ census


@dataclass
class CensusEntry:
    set: PointSet
    value: int
    match_conj43: bool | None  # None when |A| != 2p + 1
    match_thm42: bool | None  # None when |A| != p + 1

    def row(self) -> dict:
        def flag(x):
            return "" if x is None else str(x).lower()

        return {
            "indices": " ".join(map(str, self.set.indices())),
            "value": self.value,
            "match_conj43": flag(self.match_conj43),
            "match_thm42": flag(self.match_thm42),
        }


CENSUS_FIELDS = ["indices", "value", "match_conj43", "match_thm42"]


def _annotate(A: PointSet, value: int) -> CensusEntry:
    p = A.modulus.p
    c43 = matches_conjecture_4_3(A) is not None if A.card == 2 * p + 1 else None
    t42 = matches_theorem_4_2(A) is not None if A.card == p + 1 else None
    return CensusEntry(A, value, c43, t42)


def census_minimizers(p: int, m: int, value: int, *, budget: float | None = None,
                      threads: int = 1) -> list[CensusEntry]:
    """Canonical forms of every m-subset of Z_p^2 with |2^A| = value.

    Small cases enumerate all orbit representatives. Otherwise branch and
    bound with target value + 1 collects every set of minimum value; that
    answers the census exactly when value is the minimum (a smaller minimum
    makes the request infeasible at that scale).
    """
    M = Modulus(p, 2)
    if not 0 <= m <= M.size:
        raise UsageError(f"m = {m} outside [0, {M.size}]")
    orbit_cfg = SearchConfig(p, 2, m, Strategy.ORBIT)
    est, limit = estimate_work(orbit_cfg)
    if _canonical_supported(M) and est <= limit:
        deadline = None if budget is None else time.monotonic() + budget
        reps = orbit_representatives(M, m, deadline)
        if reps is None:
            raise TimeoutError("census budget exhausted before all orbits were generated")
        if not reps:
            return []
        rows = np.array([[i for i in range(M.size) if b >> i & 1] for b in reps], dtype=np.int64).reshape(len(reps), m)
        vals = batch_restricted_sizes(rows, M)
        return [_annotate(PointSet(M, b), value) for b, v in zip(reps, vals.tolist()) if v == value]

    cfg = SearchConfig(p, 2, m, Strategy.BNB, target=value + 1, time_budget=budget, thread_count=threads)
    try:
        res = rho(cfg)
    except InfeasibleError as exc:
        raise InfeasibleError(f"census p={p} m={m}: {exc}", exc.estimate) from None
    if not res.complete:
        raise TimeoutError(f"census budget exhausted at coverage {100 * res.coverage:.4f}%")
    if res.best_value is None:
        return []
    if res.best_value < value:
        raise InfeasibleError(
            f"census p={p} m={m} value={value}: the minimum is {res.best_value} < {value}, and listing "
            f"non-minimal values needs the full orbit enumeration (~{est:.3g} orbits)", est)
    return [_annotate(w, value) for w in res.witnesses]

