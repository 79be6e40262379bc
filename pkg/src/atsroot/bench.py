"""Timing of repeated statistic evaluation, full versus compact matrix.

For every size the full hypothesis of a setting is reduced once, then the
same sequence of statistic vectors is pushed through the full and the
compact formulation. Only the evaluation loop is timed. The sum of all
computed statistics (the checksum) must agree between the two runs, which is
the end-to-end check that the reduction left the statistic untouched.

For ``ats_s`` and ``ats_f`` every evaluation forms ``M = H Sigma H^T`` and
its trace terms afresh, as a resampling loop that re-estimates ``Sigma``
would. This is the same computation :class:`~atsroot.forms.AtsContext` does
once at construction.
"""

from __future__ import annotations

import csv
import math
import time
import warnings
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from .designs import SettingSpec, sample_covariance, setting_hypothesis, setting_statistics
from .reduction import reduce

CSV_COLUMNS = [
    "setting", "d", "ell", "variant", "reps", "seed",
    "t_full_s", "t_compact_s", "t_reduce_s", "speedup",
    "checksum_full", "checksum_compact",
]

WARMUP = 50
ROUNDS = 3
BLOCK = 250

VARIANT_LABELS = {"ats": "ATS", "ats_s": "ATS_s", "ats_f": "ATS_F"}
CHECKSUM_RTOL = 1e-6


class ChecksumMismatchError(RuntimeError):
    pass


@dataclass
class BenchRecord:
    setting: str
    d: int
    ell: int
    variant: str
    reps: int
    seed: int
    t_full_s: float
    t_compact_s: float
    t_reduce_s: float
    speedup: float
    checksum_full: float
    checksum_compact: float

    @property
    def m(self) -> int:
        return self.d

    @property
    def size(self) -> int:
        if self.setting == "A":
            return self.d // 2
        if self.setting == "B":
            return self.d // 3
        return int(round((math.sqrt(8 * self.d + 1) - 1) / 2))

    def checksums_agree(self, rtol: float = CHECKSUM_RTOL) -> bool:
        a, b = self.checksum_full, self.checksum_compact
        return abs(a - b) <= rtol * max(abs(a), abs(b), 1e-300)


def _kernel(variant: str, h: np.ndarray, y: np.ndarray, sigma: np.ndarray | None):
    if variant == "ats":
        def stat(x):
            r = h @ x - y
            return r @ r
    elif variant == "ats_s":
        def stat(x):
            r = h @ x - y
            return (r @ r) / np.trace(h @ sigma @ h.T)
    elif variant == "ats_f":
        def stat(x):
            r = h @ x - y
            hs = h @ sigma
            m = hs @ h.T
            return (r @ r) * np.trace(m) / np.vdot(m, m)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return stat


def time_loop(stat, xs: np.ndarray, warmup: int = WARMUP) -> tuple[float, float]:
    """Run `stat` over the rows of `xs`; return ``(elapsed_seconds, checksum)``."""
    for x in xs[: min(warmup, len(xs))]:
        stat(x)
    out = np.empty(len(xs))
    t0 = time.perf_counter()
    for i, x in enumerate(xs):
        out[i] = stat(x)
    elapsed = time.perf_counter() - t0
    return max(elapsed, 1e-9), math.fsum(out)


def _run_block(stat, xs: np.ndarray, out: np.ndarray) -> float:
    t0 = time.perf_counter()
    for i, x in enumerate(xs):
        out[i] = stat(x)
    return time.perf_counter() - t0


def time_pair(full, compact, xs: np.ndarray, rounds: int = ROUNDS, block: int = BLOCK):
    """Timings for two kernels over the same vectors.

    The vectors are processed in blocks of `block`; every block is timed
    `rounds` times per kernel, alternating between the kernels, and the
    fastest repetition of each block is summed. That keeps every evaluation
    in the total while discarding scheduler hiccups.

    Returns ``(t_full, checksum_full, t_compact, checksum_compact)``.
    """
    n = len(xs)
    for stat in (full, compact):
        for x in xs[: min(WARMUP, n)]:
            stat(x)
    out_full, out_comp = np.empty(n), np.empty(n)
    t_full = t_comp = 0.0
    for lo in range(0, n, block):
        chunk = xs[lo : lo + block]
        best_full = best_comp = math.inf
        for _ in range(max(rounds, 1)):
            best_full = min(best_full, _run_block(full, chunk, out_full[lo : lo + block]))
            best_comp = min(best_comp, _run_block(compact, chunk, out_comp[lo : lo + block]))
        t_full += best_full
        t_comp += best_comp
    return max(t_full, 1e-9), math.fsum(out_full), max(t_comp, 1e-9), math.fsum(out_comp)


def bench_one(
    spec: SettingSpec,
    reps: int = 5000,
    seed: int = 0,
    variant: str = "ats_s",
    rounds: int = ROUNDS,
) -> BenchRecord:
    """Benchmark one setting at one size.

    Each kernel runs `rounds` times over the same `reps` vectors and the
    fastest round is kept.
    """
    if reps < 1:
        raise ValueError("reps must be at least 1")
    hyp = setting_hypothesis(spec)
    t0 = time.perf_counter()
    red = reduce(hyp)
    t_reduce = time.perf_counter() - t0

    xs = setting_statistics(spec, reps, rng_seed=seed)
    sigma = None
    if variant != "ats":
        sigma = sample_covariance(xs) if reps >= 2 else np.eye(spec.d)

    t_full, c_full, t_comp, c_comp = time_pair(
        _kernel(variant, hyp.H, hyp.y, sigma), _kernel(variant, red.L, red.y_tilde, sigma), xs, rounds
    )
    rec = BenchRecord(
        setting=spec.label, d=spec.d, ell=red.ell, variant=variant, reps=reps, seed=seed,
        t_full_s=t_full, t_compact_s=t_comp, t_reduce_s=t_reduce,
        speedup=t_full / t_comp, checksum_full=c_full, checksum_compact=c_comp,
    )
    if not rec.checksums_agree():
        raise ChecksumMismatchError(
            f"setting {spec.label}, d={spec.d}: checksum {c_full!r} (full) vs {c_comp!r} (compact)"
        )
    return rec


def run_bench(
    setting: str,
    sizes: list[int],
    reps: int = 5000,
    seed: int = 0,
    variant: str = "ats_s",
    gamma: float = 1.0,
    rounds: int = ROUNDS,
) -> list[BenchRecord]:
    records = []
    for size in sizes:
        spec = SettingSpec(setting, size, gamma)
        try:
            records.append(bench_one(spec, reps, seed, variant, rounds))
        except MemoryError:
            warnings.warn(f"setting {setting}, size {size}: out of memory, skipped", stacklevel=2)
    return records


def write_bench_csv(path: str | Path, records: list[BenchRecord]) -> None:
    with open(path, "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=CSV_COLUMNS)
        w.writeheader()
        for r in records:
            w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in asdict(r).items()})


def read_bench_csv(path: str | Path) -> list[BenchRecord]:
    types = {f.name: f.type for f in fields(BenchRecord)}
    conv = {"str": str, "int": int, "float": float}
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames != CSV_COLUMNS:
            raise ValueError(f"{path}: unexpected columns {reader.fieldnames}")
        return [BenchRecord(**{k: conv[types[k]](v) for k, v in row.items()}) for row in reader]


def format_markdown(records: list[BenchRecord]) -> str:
    """One table block per setting, columns ``d(q)`` or ``d(p)`` like the timing tables."""
    blocks = []
    for label in dict.fromkeys(r.setting for r in records):
        rows = [r for r in records if r.setting == label]
        size_name = "p" if label == "C" else "q"
        variant = VARIANT_LABELS[rows[0].variant]
        head = [f"d({size_name})"] + [f"{r.d}({r.size})" for r in rows]
        lines = [
            f"Setting {label} ({rows[0].reps} evaluations, seconds)",
            "",
            "| " + " | ".join(head) + " |",
            "|" + "---|" * len(head),
            "| " + " | ".join([f"{variant} full (m rows)"] + [f"{r.t_full_s:.3f} ({r.m})" for r in rows]) + " |",
            "| " + " | ".join([f"{variant} compact (ell rows)"] + [f"{r.t_compact_s:.3f} ({r.ell})" for r in rows]) + " |",
            "| " + " | ".join(["speedup"] + [f"{r.speedup:.2f}" for r in rows]) + " |",
            "| " + " | ".join(["reduction (s)"] + [f"{r.t_reduce_s:.4f}" for r in rows]) + " |",
        ]
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def format_csv(records: list[BenchRecord]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for r in records:
        d = asdict(r)
        lines.append(",".join(repr(d[k]) if isinstance(d[k], float) else str(d[k]) for k in CSV_COLUMNS))
    return "\n".join(lines) + "\n"
