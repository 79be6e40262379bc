import numpy as np
import pytest

from atsroot import bench
from atsroot.bench import (
    BenchRecord,
    ChecksumMismatchError,
    bench_one,
    read_bench_csv,
    run_bench,
    write_bench_csv,
)
from atsroot.designs import SettingSpec
from atsroot.reduction import ReducedHypothesis


@pytest.mark.parametrize("variant", ["ats", "ats_s", "ats_f"])
@pytest.mark.parametrize("label,size", [("A", 3), ("B", 3), ("C", 4)])
def test_small_cells(label, size, variant):
    rec = bench_one(SettingSpec(label, size), reps=40, seed=1, variant=variant, rounds=1)
    assert rec.t_full_s > 0 and rec.t_compact_s > 0 and rec.speedup > 0
    assert rec.checksums_agree()
    assert rec.ell == {"A": 1, "B": 2 * size, "C": 1}[label]


def test_single_rep_smoke():
    (rec,) = run_bench("B", [2], reps=1, seed=0)
    assert rec.reps == 1 and rec.speedup > 0


def test_checksums_reproducible():
    a = bench_one(SettingSpec("C", 4), reps=30, seed=9, rounds=1)
    b = bench_one(SettingSpec("C", 4), reps=30, seed=9, rounds=1)
    assert (a.checksum_full, a.checksum_compact) == (b.checksum_full, b.checksum_compact)
    c = bench_one(SettingSpec("C", 4), reps=30, seed=10, rounds=1)
    assert c.checksum_full != a.checksum_full


def test_csv_roundtrip(tmp_path):
    records = run_bench("A", [2, 3], reps=5, seed=3, rounds=1)
    write_bench_csv(tmp_path / "r.csv", records)
    assert read_bench_csv(tmp_path / "r.csv") == records


def test_size_recovered_from_d():
    rec = BenchRecord("C", 465, 1, "ats_s", 1, 0, 1.0, 1.0, 0.0, 1.0, 0.0, 0.0)
    assert rec.size == 30


def test_mismatch_is_an_error(monkeypatch):
    def broken(hyp):
        return ReducedHypothesis(hyp.H[:1], hyp.y[:1])

    monkeypatch.setattr(bench, "reduce", broken)
    with pytest.raises(ChecksumMismatchError):
        bench_one(SettingSpec("B", 3), reps=10, rounds=1)


def test_out_of_memory_skips_size(monkeypatch):
    real = bench.bench_one

    def flaky(spec, *args):
        if spec.size == 3:
            raise MemoryError
        return real(spec, *args)

    monkeypatch.setattr(bench, "bench_one", flaky)
    with pytest.warns(UserWarning, match="size 3"):
        records = run_bench("A", [2, 3, 4], reps=3, rounds=1)
    assert [r.d for r in records] == [4, 8]


def test_time_pair_counts_every_vector():
    calls = []
    xs = np.arange(12.0).reshape(6, 2)
    t_full, c_full, t_comp, c_comp = bench.time_pair(
        lambda x: calls.append(1) or x.sum(), lambda x: x.sum(), xs, rounds=2, block=4
    )
    assert c_full == c_comp == xs.sum()
    # warm-up covers all 6 vectors once, then 2 rounds over both blocks
    assert len(calls) == 6 + 2 * 6
