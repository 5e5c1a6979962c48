"""Exact computation of rho(Z_p^r, m) = min |2^A| over m-subsets A.

Three strategies:

EXHAUSTIVE  every m-subset, evaluated in numpy batches.
ORBIT       affine-orbit representatives built level by level: every
            (k+1)-set is affinely equivalent to rep + {x} for some k-set
            representative rep, so extending all reps by all points and
            canonicalizing reaches every orbit.
BNB         depth-first extension of a normal-form prefix, pruned by the
            monotone quantity |2^P| and by the profile completion bound in
            each of the p + 1 subgroup directions.

BNB normal form: any set of size >= 3 that is not collinear maps under
AGL(2, p) to one containing (0,0), (1,0), (0,1); a collinear set maps into
the x-axis containing (0,0), (1,0). These are the two seed families.

Pruning keeps ties (a prefix is cut only when its bound exceeds the best
value so far), so every minimizer is reached and the canonical witness list
does not depend on visiting order or thread count.
"""
from __future__ import annotations

import enum
import logging
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import comb

import numpy as np

from ..group_core import Modulus, UsageError, _decode_table, all_subgroups
from ..profiles import CompletionBound
from ..setops import (
    MAX_AFFINE_TABLE,
    PointSet,
    _translate_bits,
    affine_permutations,
    general_linear_group,
    orbit_bits,
)
from . import checkpoint as ckpt_mod
from .checkpoint import Checkpoint, CheckpointError
from .kernels import batch_restricted_sizes, combination_chunks

log = logging.getLogger(__name__)

# without a time budget, refuse jobs estimated above these sizes
EXHAUSTIVE_LIMIT = 60_000_000
ORBIT_LIMIT = 200_000
BNB_LIMIT = 60_000_000
# leaves per BNB work unit (the first unit is the largest)
UNIT_LEAVES = 50_000


class Strategy(enum.Enum):
    EXHAUSTIVE = "exhaustive"
    ORBIT = "orbit"
    BNB = "bnb"


class InfeasibleError(RuntimeError):
    def __init__(self, message: str, estimate: float):
        super().__init__(message)
        self.estimate = estimate


@dataclass(frozen=True)
class SearchConfig:
    p: int
    r: int
    m: int
    strategy: Strategy = Strategy.EXHAUSTIVE
    target: int | None = None
    time_budget: float | None = None
    checkpoint_path: str | None = None
    thread_count: int = 1
    audit: bool = False

    def __post_init__(self) -> None:
        M = Modulus(self.p, self.r)
        object.__setattr__(self, "strategy", Strategy(self.strategy))
        if not 0 <= self.m <= M.size:
            raise UsageError(f"m = {self.m} outside [0, {M.size}]")
        if self.strategy is not Strategy.EXHAUSTIVE and self.r != 2:
            raise UsageError(f"{self.strategy.value} strategy needs r = 2")
        if self.thread_count < 1:
            raise UsageError("thread_count must be >= 1")
        if self.audit and self.strategy is not Strategy.BNB:
            raise UsageError("audit mode is a BNB feature")

    @property
    def modulus(self) -> Modulus:
        return Modulus(self.p, self.r)

    def canonical_text(self) -> str:
        """Fields that determine the result (budget, paths and threads excluded)."""
        t = "none" if self.target is None else str(self.target)
        return f"p={self.p};r={self.r};m={self.m};strategy={self.strategy.value};target={t};audit={int(self.audit)}"

    @property
    def config_hash(self) -> int:
        return ckpt_mod.fnv1a64(self.canonical_text().encode())


@dataclass
class SearchWitness:
    config: SearchConfig
    best_value: int | None
    witnesses: list[PointSet]
    complete: bool
    nodes_visited: int = 0
    pruned_count: int = 0
    coverage: float = 1.0
    audit_leaves: int = 0
    audit_violations: int = 0
    elapsed: float = field(default=0.0, compare=False)

    @property
    def lower_bound(self) -> int | None:
        """Proven lower bound on rho: best_value, or the target when nothing beat it."""
        if not self.complete:
            return None
        if self.best_value is not None:
            return self.best_value
        return self.config.target

    def summary(self) -> dict:
        return {
            "p": self.config.p,
            "r": self.config.r,
            "m": self.config.m,
            "strategy": self.config.strategy.value,
            "target": self.config.target,
            "best_value": self.best_value,
            "complete": self.complete,
            "coverage": round(self.coverage, 12),
            "witness_count": len(self.witnesses),
            "nodes_visited": self.nodes_visited,
            "pruned_count": self.pruned_count,
            "audit_leaves": self.audit_leaves,
            "audit_violations": self.audit_violations,
        }


def witness_file_text(result: SearchWitness) -> str:
    c = result.config
    head = (
        f"# p={c.p} r={c.r} m={c.m} value={result.best_value if result.best_value is not None else 'none'} "
        f"complete={'true' if result.complete else 'false'}"
    )
    lines = [head] + [" ".join(map(str, w.indices())) for w in result.witnesses]
    return "\n".join(lines) + "\n"


def parse_witness_file(text: str, M: Modulus) -> tuple[dict, list[PointSet]]:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#"):
        raise ValueError("witness file must start with a '# p=.. r=.. m=..' header")
    header = dict(kv.split("=", 1) for kv in lines[0][1:].split())
    sets = [PointSet.from_indices(M, map(int, ln.split())) for ln in lines[1:] if ln.strip()]
    return header, sets


# ------------------------------------------------------------ witnesses


def _canonical_supported(M: Modulus) -> bool:
    if M.r > 2 or M.size > 64:
        return False
    return len(general_linear_group(M.p, M.r)) * M.size * M.size <= MAX_AFFINE_TABLE


def canonical_witnesses(M: Modulus, bit_sets, limit: int | None = None) -> list[PointSet]:
    """Distinct orbit representatives among `bit_sets`, sorted by bit-vector.

    Falls back to the raw sets when canonical forms are unavailable (p^r > 64).
    """
    if not _canonical_supported(M):
        out = sorted(set(bit_sets))
        return [PointSet(M, b) for b in out[:limit]]
    seen: set[int] = set()
    reps = []
    for b in sorted(set(bit_sets)):
        if b in seen:
            continue
        images = orbit_bits(PointSet(M, b))
        seen |= images
        reps.append(min(images))
    reps.sort()
    return [PointSet(M, b) for b in reps[:limit]]


def _estimate(cfg: SearchConfig) -> float:
    n = cfg.modulus.size
    if cfg.strategy is Strategy.EXHAUSTIVE:
        return float(comb(n, cfg.m))
    if cfg.strategy is Strategy.ORBIT:
        group = len(general_linear_group(cfg.p, 2)) * n
        return comb(n, cfg.m) / group
    return float(sum(comb(len(c), cfg.m - len(s)) for s, c in _families(cfg.p, cfg.m)))


def estimate_work(cfg: SearchConfig) -> tuple[float, float]:
    """(estimated work units, limit) for the configured strategy."""
    limit = {Strategy.EXHAUSTIVE: EXHAUSTIVE_LIMIT, Strategy.ORBIT: ORBIT_LIMIT, Strategy.BNB: BNB_LIMIT}
    return _estimate(cfg), float(limit[cfg.strategy])


def rho(config: SearchConfig, *, stop_after_units: int | None = None, checkpoint_every: float = 30.0) -> SearchWitness:
    """Minimum |2^A| over m-subsets (or over those below config.target).

    `stop_after_units` interrupts a BNB/ORBIT run after that many completed
    work units (BNB) or levels (ORBIT), as a deterministic stand-in for a
    killed process; the checkpoint is written as on budget exhaustion.
    """
    est, limit = estimate_work(config)
    if config.time_budget is None and est > limit:
        raise InfeasibleError(
            f"{config.strategy.value} search for p={config.p} r={config.r} m={config.m} "
            f"needs ~{est:.3g} work units (limit {limit:.3g}); pass a time budget",
            est,
        )
    t0 = time.monotonic()
    deadline = None if config.time_budget is None else t0 + config.time_budget
    if config.strategy is Strategy.EXHAUSTIVE:
        out = _run_exhaustive(config, deadline)
    elif config.strategy is Strategy.ORBIT:
        out = _run_orbit(config, deadline, stop_after_units)
    else:
        out = _BranchAndBound(config, deadline, stop_after_units, checkpoint_every).run()
    out.elapsed = time.monotonic() - t0
    return out


def _apply_target(cfg: SearchConfig, best: int | None) -> int | None:
    if best is None:
        return None
    if cfg.target is not None and best >= cfg.target:
        return None
    return best


# ---------------------------------------------------------------- exhaustive


def _run_exhaustive(cfg: SearchConfig, deadline: float | None) -> SearchWitness:
    M = cfg.modulus
    n, m = M.size, cfg.m
    total = comb(n, m)
    best = None
    keep: list[np.ndarray] = []
    covered = 0
    complete = True

    def evaluate(chunk: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return chunk, batch_restricted_sizes(chunk, M)

    chunks = combination_chunks(n, m)
    pool = ThreadPoolExecutor(cfg.thread_count) if cfg.thread_count > 1 else None
    try:
        results = pool.map(evaluate, chunks) if pool else map(evaluate, chunks)
        for chunk, vals in results:
            low = int(vals.min())
            if best is None or low < best:
                best = low
                keep = [chunk[vals == low]]
            elif low == best:
                keep.append(chunk[vals == low])
            covered += len(chunk)
            if deadline is not None and time.monotonic() > deadline and covered < total:
                complete = False
                break
    finally:
        if pool:
            pool.shutdown(cancel_futures=True)

    best_value = _apply_target(cfg, best)
    witnesses: list[PointSet] = []
    if best_value is not None:
        bits = []
        for rows in keep:
            for row in rows.tolist():
                b = 0
                for i in row:
                    b |= 1 << i
                bits.append(b)
        witnesses = canonical_witnesses(M, bits)
    return SearchWitness(cfg, best_value, witnesses, complete, nodes_visited=covered,
                         coverage=covered / total if total else 1.0)


# --------------------------------------------------------------------- orbit


def _extend_level(M: Modulus, reps: list[int]) -> tuple[list[int], int]:
    """Canonical (k+1)-set representatives from k-set representatives."""
    perms = affine_permutations(M.p, M.r)
    n = M.size
    weights = np.left_shift(np.uint64(1), np.arange(n, dtype=np.uint64))
    wperm = weights[perms]  # (G, n): image weight of each point under each map
    found: set[int] = set()
    tried = 0
    for rep in reps:
        idx = [i for i in range(n) if rep >> i & 1]
        base = wperm[:, idx].sum(axis=1, dtype=np.uint64) if idx else np.zeros(len(perms), dtype=np.uint64)
        free = [x for x in range(n) if not rep >> x & 1]
        if not free:
            continue
        vals = (base[:, None] + wperm[:, free]).min(axis=0)
        found.update(int(v) for v in vals)
        tried += len(free)
    return sorted(found), tried


def orbit_representatives(M: Modulus, m: int, deadline: float | None = None) -> list[int] | None:
    """Canonical bit-vectors of every affine orbit of m-subsets (None if the deadline passes)."""
    reps = [0]
    for _ in range(m):
        if deadline is not None and time.monotonic() > deadline:
            return None
        reps, _tried = _extend_level(M, reps)
    return reps


def _run_orbit(cfg: SearchConfig, deadline: float | None, stop_after: int | None) -> SearchWitness:
    M = cfg.modulus
    if not _canonical_supported(M):
        raise UsageError("orbit strategy needs p^r <= 64")
    level, reps, nodes = 0, [0], 0
    state = ckpt_mod.load(cfg.checkpoint_path) if cfg.checkpoint_path else None
    if state is not None:
        if state.config_hash != cfg.config_hash:
            raise CheckpointError("checkpoint was written for a different configuration")
        level = state.level
        reps = [sum(1 << i for i in rec) for tag, rec in state.frontier if tag == ckpt_mod.TAG_ORBIT_REP]
        nodes = state.nodes

    def save() -> None:
        if cfg.checkpoint_path:
            frontier = [(ckpt_mod.TAG_ORBIT_REP, tuple(i for i in range(M.size) if b >> i & 1)) for b in reps]
            ckpt_mod.save(cfg.checkpoint_path, Checkpoint(cfg.config_hash, 1, None, nodes, 0, level, cfg.m,
                                                          level=level, frontier=frontier))

    done_now = 0
    while level < cfg.m:
        if (deadline is not None and time.monotonic() > deadline) or (stop_after is not None and done_now >= stop_after):
            save()
            return SearchWitness(cfg, None, [], False, nodes_visited=nodes, coverage=level / cfg.m)
        reps, tried = _extend_level(M, reps)
        nodes += tried
        level += 1
        done_now += 1
    save()
    if reps:
        rows = np.array([[i for i in range(M.size) if b >> i & 1] for b in reps], dtype=np.int64).reshape(len(reps), cfg.m)
        vals = batch_restricted_sizes(rows, M)
        best = int(vals.min())
    else:
        best = None
    best_value = _apply_target(cfg, best)
    witnesses = []
    if best_value is not None:
        witnesses = [PointSet(M, b) for b, v in zip(reps, vals.tolist()) if v == best_value]
    return SearchWitness(cfg, best_value, witnesses, True, nodes_visited=nodes)


# ------------------------------------------------------------ branch & bound


def _families(p: int, m: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """(seed points, candidate points) for the two normal-form families."""
    if m == 0:
        return [((), ())]
    if m == 1:
        return [((0,), ())]
    fams = []
    if m >= 3:
        seeds = (0, 1, p)
        fams.append((seeds, tuple(x for x in range(p * p) if x not in seeds)))
    if m <= p:
        fams.append(((0, 1), tuple(range(2, p))))
    return fams


def _unit_depth(L: int, k: int) -> int:
    if k <= 0:
        return 0
    for d in range(1, k + 1):
        if comb(L - d, k - d) <= UNIT_LEAVES:
            return d
    return k


class _Budget(Exception):
    pass


class _BranchAndBound:
    """Lexicographic DFS over normal-form prefixes.

    Progress is tracked by a watermark key (family, *positions): every leaf
    below or lexicographically before it has been decided. The watermark
    moves after each completed work unit and after each prefix pruned above
    unit depth; `_mark` snapshots the counters at that moment, and an
    interrupted run falls back to the last snapshot, so a resumed run ends
    with exactly the counters of an uninterrupted one.
    """

    def __init__(self, cfg: SearchConfig, deadline, stop_after, checkpoint_every):
        self.cfg = cfg
        M = cfg.modulus
        self.M = M
        self.p = M.p
        self.m = cfg.m
        self.decode = _decode_table(M.p, 2)
        self.labels = [H.label_table for H in all_subgroups(M)]
        self.bound = CompletionBound(M.p, cfg.m)
        self.families = _families(M.p, cfg.m)
        self.deadline = deadline
        self.stop_after = stop_after
        self.checkpoint_every = checkpoint_every
        self.lock = threading.Lock()
        self.total = sum(comb(len(c), self.m - len(s)) for s, c in self.families)
        self.upper = cfg.target - 1 if cfg.target is not None else self._heuristic_upper()
        self.leaves: dict[int, int] = {}  # bits -> value, for values <= upper
        self.nodes = 0
        self.pruned = 0
        self.covered = 0
        self.audit_leaves = 0
        self.audit_violations = 0
        self.units_done = 0
        self.watermark: tuple[int, ...] | None = None
        self.defer_marks = False
        self.snap = None
        self._mark(None)

    # -- bookkeeping

    def _heuristic_upper(self) -> int:
        """|2^A| for the first m flat indices: any real set bounds rho from above."""
        if self.m < 2:
            return 0
        return _restricted_card(self.M, (1 << self.m) - 1)

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes & 1023 == 0 and self.deadline is not None and time.monotonic() > self.deadline:
            raise _Budget()

    def _prunable(self, dbl: int, profs: list[list[int]]) -> bool:
        upper = self.upper
        if dbl.bit_count() > upper:
            return True
        bound = self.bound
        for prof in profs:
            if bound(tuple(prof)) > upper:
                return True
        return False

    def _record_leaf(self, bits: int, value: int) -> None:
        with self.lock:
            if value < self.upper:
                self.upper = value
                self.leaves = {b: v for b, v in self.leaves.items() if v <= value}
            if value <= self.upper:
                self.leaves[bits] = value

    def _audit(self, bits: int, cands: tuple[int, ...], pos: int, depth: int, upper: int) -> None:
        """Force-complete a pruned prefix and count completions that should have survived."""
        need = self.m - depth
        rest = np.asarray(cands[pos:], dtype=np.int64)
        prefix = np.asarray([i for i in range(self.M.size) if bits >> i & 1], dtype=np.int64)
        for chunk in combination_chunks(len(rest), need):
            rows = rest[chunk.astype(np.int64)] if need else np.zeros((1, 0), np.int64)
            full = np.hstack([np.tile(prefix, (len(rows), 1)), rows])
            vals = batch_restricted_sizes(full, self.M)
            with self.lock:
                self.audit_leaves += len(vals)
                self.audit_violations += int((vals <= upper).sum())

    def _mark(self, key) -> None:
        if key is not None:
            self.watermark = key
        self.snap = (self.watermark, self.nodes, self.pruned, self.covered, self.audit_leaves,
                     self.audit_violations, self.upper, dict(self.leaves))

    def _checkpoint(self) -> Checkpoint:
        wm, nodes, pruned, covered, al, av, upper, leaves = self.snap
        frontier = [] if wm is None else [(ckpt_mod.TAG_WATERMARK, wm)]
        witnesses = [tuple(i for i in range(self.M.size) if b >> i & 1) for b in sorted(leaves)]
        best = min(leaves.values()) if leaves else None
        # the BNB record keeps the current pruning bound in the level field
        return Checkpoint(self.cfg.config_hash, 2, best, nodes, pruned, covered, self.total,
                          al, av, level=upper, witnesses=witnesses, frontier=frontier)

    def _restore(self, state: Checkpoint) -> None:
        if state.config_hash != self.cfg.config_hash:
            raise CheckpointError("checkpoint was written for a different configuration")
        if state.strategy != 2:
            raise CheckpointError("checkpoint is not from a BNB run")
        self.nodes, self.pruned, self.covered = state.nodes, state.pruned, state.covered
        self.audit_leaves, self.audit_violations = state.audit_leaves, state.audit_violations
        self.upper = state.level
        for w in state.witnesses:
            b = sum(1 << i for i in w)
            self.leaves[b] = _restricted_card(self.M, b)
        for tag, rec in state.frontier:
            if tag == ckpt_mod.TAG_WATERMARK:
                self.watermark = tuple(rec)
            else:
                raise CheckpointError(f"unexpected frontier record tag {tag} in a BNB checkpoint")
        self._mark(None)

    def _save(self) -> None:
        if self.cfg.checkpoint_path:
            ckpt_mod.save(self.cfg.checkpoint_path, self._checkpoint())

    # -- search

    def _push(self, x, bits, dbl, profs):
        nd = dbl | _translate_bits(bits, self.decode[x], self.p, 2)
        for prof, lab in zip(profs, self.labels):
            prof[lab[x]] += 1
        return bits | (1 << x), nd

    def _pop(self, x, profs) -> None:
        for prof, lab in zip(profs, self.labels):
            prof[lab[x]] -= 1

    def _dfs(self, cands, start, depth, bits, dbl, profs) -> None:
        """Explore below a node that already passed the prune test."""
        self._tick()
        if depth == self.m:
            self._record_leaf(bits, dbl.bit_count())
            return
        need = self.m - depth
        for pos in range(start, len(cands) - need + 1):
            x = cands[pos]
            nb, nd = self._push(x, bits, dbl, profs)
            if self._prunable(nd, profs):
                with self.lock:
                    self.pruned += 1
                if self.cfg.audit:
                    self._audit(nb, cands, pos + 1, depth + 1, self.upper)
            else:
                self._dfs(cands, pos + 1, depth + 1, nb, nd, profs)
            self._pop(x, profs)

    def _skip_state(self, key: tuple[int, ...]) -> str:
        """'done', 'path' (a strict prefix of the watermark) or 'new'."""
        w = self.watermark
        if w is None:
            return "new"
        n = min(len(key), len(w))
        if key[:n] < w[:n]:
            return "done"
        if key[:n] == w[:n]:
            return "path" if len(key) < len(w) else "done"
        return "new"

    def _units(self):
        """Yield work units (family, positions, state) in lexicographic order."""
        for f, (seeds, cands) in enumerate(self.families):
            k = self.m - len(seeds)
            D = _unit_depth(len(cands), k)
            bits, dbl = 0, 0
            profs = [[0] * self.p for _ in self.labels]
            for x in seeds:
                bits, dbl = self._push(x, bits, dbl, profs)
            yield from self._gen(f, cands, k, D, (), bits, dbl, profs)

    def _gen(self, f, cands, k, D, positions, bits, dbl, profs):
        key = (f, *positions)
        state = self._skip_state(key)
        if state == "done":
            return
        start = positions[-1] + 1 if positions else 0
        if len(positions) == D:
            yield key, cands, start, bits, dbl, [row[:] for row in profs]
            return
        if state == "new":
            self._tick()
            if self._prunable(dbl, profs):
                self.pruned += 1
                self.covered += comb(len(cands) - start, k - len(positions))
                if self.cfg.audit:
                    self._audit(bits, cands, start, self.m - k + len(positions), self.upper)
                if not self.defer_marks:
                    self._mark(key)
                return
        need = k - len(positions)
        for pos in range(start, len(cands) - need + 1):
            x = cands[pos]
            nb, nd = self._push(x, bits, dbl, profs)
            yield from self._gen(f, cands, k, D, positions + (pos,), nb, nd, profs)
            self._pop(x, profs)

    def _run_unit(self, key, cands, start, bits, dbl, profs) -> int:
        """Search one unit; returns its leaf weight."""
        depth = bits.bit_count()
        weight = comb(len(cands) - start, self.m - depth)
        if self._prunable(dbl, profs):
            with self.lock:
                self.nodes += 1
                self.pruned += 1
            if self.cfg.audit:
                self._audit(bits, cands, start, depth, self.upper)
            return weight
        self._dfs(cands, start, depth, bits, dbl, profs)
        return weight

    def run(self) -> SearchWitness:
        cfg = self.cfg
        if cfg.checkpoint_path:
            state = ckpt_mod.load(cfg.checkpoint_path)
            if state is not None:
                self._restore(state)
        complete = True
        try:
            if cfg.thread_count == 1:
                self._run_sequential()
            else:
                self._run_parallel()
        except _Budget:
            complete = False
        if complete:
            self._mark(None)
        self._save()
        wm, nodes, pruned, covered, al, av, upper, leaves = self.snap
        best = min(leaves.values()) if leaves else None
        best_value = _apply_target(cfg, best)
        witnesses = canonical_witnesses(self.M, [b for b, v in leaves.items() if v == best]) if best_value is not None else []
        return SearchWitness(
            cfg, best_value, witnesses, complete,
            nodes_visited=nodes, pruned_count=pruned,
            coverage=covered / self.total if self.total else 1.0,
            audit_leaves=al, audit_violations=av,
        )

    def _run_sequential(self) -> None:
        last_save = time.monotonic()
        for key, cands, start, bits, dbl, profs in self._units():
            if self.stop_after is not None and self.units_done >= self.stop_after:
                raise _Budget()
            self.covered += self._run_unit(key, cands, start, bits, dbl, profs)
            self.units_done += 1
            self._mark(key)
            if self.cfg.checkpoint_path and time.monotonic() - last_save > self.checkpoint_every:
                self._save()
                last_save = time.monotonic()

    def _run_parallel(self) -> None:
        """Batches of units on a thread pool; the shared bound `upper` only decreases.

        The watermark advances once per finished batch. A batch cut short by
        the budget is discarded as a whole.
        """
        cfg = self.cfg
        batch_size = 4 * cfg.thread_count
        aborted = threading.Event()
        last_save = time.monotonic()

        def work(unit):
            if aborted.is_set():
                return 0
            try:
                return self._run_unit(*unit)
            except _Budget:
                aborted.set()
                return 0

        units = self._units()
        with ThreadPoolExecutor(cfg.thread_count) as pool:
            while True:
                self.defer_marks = True
                batch = []
                for unit in units:
                    batch.append(unit)
                    if len(batch) == batch_size:
                        break
                self.defer_marks = False
                if not batch:
                    # trailing prunes after the last unit
                    self._mark(None)
                    return
                if self.stop_after is not None and self.units_done + len(batch) > self.stop_after:
                    raise _Budget()
                weights = list(pool.map(work, batch))
                if aborted.is_set():
                    raise _Budget()
                self.covered += sum(weights)
                self.units_done += len(batch)
                self._mark(batch[-1][0])
                if cfg.checkpoint_path and time.monotonic() - last_save > self.checkpoint_every:
                    self._save()
                    last_save = time.monotonic()


def _restricted_card(M: Modulus, bits: int) -> int:
    from ..setops import restricted_size

    return restricted_size(PointSet(M, bits))
