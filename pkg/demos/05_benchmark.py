"""
Timing the full and the compact statistic
=========================================

The compact matrix has fewer rows, so each evaluation is cheaper. The
gain is largest when the hypothesis matrix is very rank deficient.
Absolute times depend on the machine; the ratios are what to look at.
"""

from atsroot.bench import format_markdown, run_bench

records = []
records += run_bench("A", [5, 10, 20], reps=1000, seed=0)
records += run_bench("B", [5, 10, 20], reps=1000, seed=0)
records += run_bench("C", [5, 10], reps=1000, seed=0)
print(format_markdown(records))
