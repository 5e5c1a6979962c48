import os

import numpy as np
import pytest

from oracles import burnside_orbit_count, naive_double, naive_rho
from rsumset.group_core import Modulus, UsageError
from rsumset.search import (
    CheckpointError,
    InfeasibleError,
    SearchConfig,
    Strategy,
    orbit_representatives,
    rho,
)
from rsumset.search import checkpoint as ck
from rsumset.search.engine import parse_witness_file, witness_file_text
from rsumset.search.kernels import batch_restricted_sizes, combination_chunks, random_subsets
from rsumset.search.verify import census_minimizers, sample_min, verify_theorem_1_4
from rsumset.setops import canonical_form, restricted_size


@pytest.mark.parametrize("p,r,m,want", [(5, 1, 3, 3), (5, 2, 6, 10), (5, 2, 11, 20), (5, 2, 4, 5)])
def test_rho_examples(p, r, m, want):
    res = rho(SearchConfig(p, r, m))
    assert res.complete and res.best_value == want


def test_config_validation():
    with pytest.raises(UsageError):
        SearchConfig(5, 2, 26)
    with pytest.raises(UsageError):
        SearchConfig(5, 1, 3, Strategy.BNB)
    with pytest.raises(UsageError):
        SearchConfig(5, 2, 3, thread_count=0)
    with pytest.raises(UsageError):
        SearchConfig(5, 2, 3, audit=True)
    with pytest.raises(UsageError):
        SearchConfig(4, 2, 3)


def test_kernel_chunks_cover_all_subsets():
    total = sum(len(c) for c in combination_chunks(10, 4, chunk=37))
    assert total == 210
    rows = next(combination_chunks(25, 3, chunk=5))
    assert rows.tolist()[0] == [0, 1, 2]


def test_batch_kernel_both_paths_agree():
    M = Modulus(5, 2)
    rows = random_subsets(np.random.default_rng(0), 25, 9, 500)
    assert (batch_restricted_sizes(rows, M, packed=True) == batch_restricted_sizes(rows, M, packed=False)).all()
    assert all(v == naive_double(r, 5, 2) for r, v in zip(rows.tolist()[:100], batch_restricted_sizes(rows, M)))


@pytest.mark.parametrize("p,r", [(3, 1), (5, 1), (7, 1), (11, 1), (13, 1), (17, 1), (19, 1), (23, 1), (3, 2), (3, 3)])
def test_exhaustive_matches_naive_small_groups(p, r):
    n = p**r
    for m in range(0, min(n, 12) + 1):
        if m <= 4 or n <= 11:
            assert rho(SearchConfig(p, r, m)).best_value == naive_rho(p, r, m), (p, r, m)


@pytest.mark.parametrize("p", [3, 5])
def test_strategy_agreement_rank_two(p):
    table = []
    for m in range(0, min(p * p, 12) + 1):
        e = rho(SearchConfig(p, 2, m))
        o = rho(SearchConfig(p, 2, m, Strategy.ORBIT))
        b = rho(SearchConfig(p, 2, m, Strategy.BNB))
        assert e.best_value == o.best_value == b.best_value, m
        assert [w.bits for w in e.witnesses] == [w.bits for w in o.witnesses] == [w.bits for w in b.witnesses]
        for w in b.witnesses:
            assert restricted_size(w) == b.best_value and canonical_form(w) == w
        table.append(e.best_value)
    if p == 5:
        assert table == [0, 0, 1, 3, 5, 5, 10, 11, 13, 15, 15, 20, 21]
    drops = [m for m in range(1, len(table)) if table[m] < table[m - 1]]
    assert drops == [], f"rho decreases at m = {drops}"


def test_orbit_counts_match_burnside():
    M = Modulus(5, 2)
    assert len(orbit_representatives(M, 3)) == burnside_orbit_count(5, 3)
    assert len(orbit_representatives(M, 11)) == burnside_orbit_count(5, 11)


def test_rho_p7_small_m_all_strategies():
    for m in range(2, 6):
        vals = {s: rho(SearchConfig(7, 2, m, s)).best_value for s in Strategy}
        assert len(set(vals.values())) == 1, vals


@pytest.mark.parametrize("threads", [2, 4])
def test_thread_count_does_not_change_output(threads):
    for m in (7, 11):
        one = rho(SearchConfig(5, 2, m, Strategy.BNB))
        many = rho(SearchConfig(5, 2, m, Strategy.BNB, thread_count=threads))
        assert one.best_value == many.best_value
        assert [w.bits for w in one.witnesses] == [w.bits for w in many.witnesses]
    e1 = rho(SearchConfig(5, 2, 6))
    e4 = rho(SearchConfig(5, 2, 6, thread_count=threads))
    assert e1.summary() == e4.summary() and e1.witnesses == e4.witnesses


@pytest.mark.parametrize("p,ms", [(5, range(0, 12)), (7, range(2, 8))])
def test_pruning_audit(p, ms):
    for m in ms:
        res = rho(SearchConfig(p, 2, m, Strategy.BNB, audit=True))
        assert res.complete and res.audit_violations == 0, m
        if res.pruned_count:
            assert res.audit_leaves > 0


def test_target_mode():
    below = rho(SearchConfig(5, 2, 11, Strategy.BNB, target=20))
    assert below.complete and below.best_value is None and below.lower_bound == 20
    hit = rho(SearchConfig(5, 2, 11, Strategy.BNB, target=21))
    assert hit.best_value == 20 and hit.lower_bound == 20
    ex = rho(SearchConfig(5, 2, 11, Strategy.EXHAUSTIVE, target=20))
    assert ex.best_value is None and ex.complete


def test_checkpoint_bytes_roundtrip_and_errors(tmp_path):
    c = ck.Checkpoint(123, 2, 20, 5, 6, 7, 8, 1, 0, level=19, witnesses=[(0, 1, 2)], frontier=[(0, (0, 3, 4))])
    assert ck.Checkpoint.from_bytes(c.to_bytes()) == c
    with pytest.raises(CheckpointError):
        ck.Checkpoint.from_bytes(b"XXXXX" + c.to_bytes()[5:])
    with pytest.raises(CheckpointError):
        ck.Checkpoint.from_bytes(c.to_bytes()[:-1])
    path = tmp_path / "c.bin"
    assert ck.load(path) is None
    path.write_bytes(b"")
    assert ck.load(path) is None
    ck.save(path, c)
    assert ck.load(path) == c


@pytest.mark.parametrize("stop", [1, 7, 40, 60])
def test_save_kill_resume_is_identical(tmp_path, stop):
    path = str(tmp_path / "run.ckpt")
    full = rho(SearchConfig(5, 2, 11, Strategy.BNB))
    cfg = SearchConfig(5, 2, 11, Strategy.BNB, checkpoint_path=path)
    part = rho(cfg, stop_after_units=stop)
    assert not part.complete and os.path.getsize(path) > 0
    again = rho(cfg)
    assert again.summary() == full.summary()
    assert again.witnesses == full.witnesses


def test_resume_twice_and_parallel_resume(tmp_path):
    path = str(tmp_path / "run.ckpt")
    full = rho(SearchConfig(5, 2, 11, Strategy.BNB))
    cfg = SearchConfig(5, 2, 11, Strategy.BNB, checkpoint_path=path)
    rho(cfg, stop_after_units=5)
    rho(cfg, stop_after_units=20)
    assert rho(cfg).summary() == full.summary()
    path2 = str(tmp_path / "par.ckpt")
    cfg2 = SearchConfig(5, 2, 11, Strategy.BNB, checkpoint_path=path2, thread_count=3)
    rho(cfg2, stop_after_units=24)
    res = rho(cfg2)
    assert res.complete and res.best_value == 20 and res.witnesses == full.witnesses
    assert res.coverage == 1.0


def test_resume_with_altered_config_refused(tmp_path):
    path = str(tmp_path / "run.ckpt")
    rho(SearchConfig(5, 2, 11, Strategy.BNB, checkpoint_path=path), stop_after_units=3)
    with pytest.raises(CheckpointError):
        rho(SearchConfig(5, 2, 10, Strategy.BNB, checkpoint_path=path))
    with pytest.raises(CheckpointError):
        rho(SearchConfig(5, 2, 11, Strategy.BNB, target=20, checkpoint_path=path))


def test_empty_checkpoint_means_fresh_run(tmp_path):
    path = tmp_path / "fresh.ckpt"
    path.write_bytes(b"")
    res = rho(SearchConfig(5, 2, 9, Strategy.BNB, checkpoint_path=str(path)))
    assert res.complete and res.best_value == 15


def test_orbit_checkpoint_resume(tmp_path):
    path = str(tmp_path / "orbit.ckpt")
    full = rho(SearchConfig(5, 2, 9, Strategy.ORBIT))
    cfg = SearchConfig(5, 2, 9, Strategy.ORBIT, checkpoint_path=path)
    part = rho(cfg, stop_after_units=5)
    assert not part.complete and part.coverage == pytest.approx(5 / 9)
    assert rho(cfg).summary() == full.summary()


def test_infeasible_without_budget():
    with pytest.raises(InfeasibleError) as e:
        rho(SearchConfig(7, 2, 15, Strategy.BNB))
    assert e.value.estimate > 1e9
    with pytest.raises(InfeasibleError):
        rho(SearchConfig(7, 2, 15))


def test_budget_truncation_writes_checkpoint(tmp_path):
    path = str(tmp_path / "p7.ckpt")
    res = rho(SearchConfig(7, 2, 15, Strategy.BNB, target=28, time_budget=0.3, checkpoint_path=path))
    assert not res.complete and 0.0 <= res.coverage < 1.0
    assert ck.load(path) is not None


def test_witness_file_roundtrip():
    res = rho(SearchConfig(5, 2, 6))
    text = witness_file_text(res)
    assert text.splitlines()[0] == "# p=5 r=2 m=6 value=10 complete=true"
    header, sets = parse_witness_file(text, Modulus(5, 2))
    assert header["value"] == "10" and sets == res.witnesses


def test_verify_p7_small_budget(tmp_path):
    path = str(tmp_path / "v7.ckpt")
    rep = verify_theorem_1_4(7, budget=0.2, checkpoint=path)
    assert rep.attainment_ok and rep.attainment_value == 28
    assert rep.lower_bound_ok is None and not rep.complete
    assert ck.load(path) is not None
    assert "PARTIAL" in rep.render()


def test_verify_sampling_mode():
    rep = verify_theorem_1_4(11, samples=2000, seed=5)
    assert rep.attainment_ok and rep.method == "sample" and not rep.complete
    assert rep.sample.below == 0 and rep.sample.min_value >= 44
    with pytest.raises(UsageError):
        verify_theorem_1_4(9)
    with pytest.raises(UsageError):
        verify_theorem_1_4(3)


def test_sampling_is_reproducible():
    a = sample_min(7, 2, 15, 3000, seed=11, threshold=28)
    b = sample_min(7, 2, 15, 3000, seed=11, threshold=28)
    assert a == b and a.min_value >= 28
    assert restricted_size(__import__("rsumset").PointSet.from_indices(Modulus(7, 2), a.example)) == a.min_value


def test_census_examples():
    six = census_minimizers(5, 6, 10)
    assert six and all(e.match_thm42 for e in six)
    eleven = census_minimizers(5, 11, 20)
    assert eleven and all(e.match_conj43 is not None for e in eleven)
    assert census_minimizers(5, 11, 19) == []


def test_census_cross_check_against_exhaustive():
    res = rho(SearchConfig(5, 2, 11))
    assert [e.set.bits for e in census_minimizers(5, 11, 20)] == [w.bits for w in res.witnesses]


def test_census_infeasible():
    with pytest.raises(InfeasibleError):
        census_minimizers(7, 15, 29)
