"""
Which mean of the speedups is the true speedup?
===============================================

The answer depends on the regime. We simulate each one and compare.
"""

import numpy as np
from heet import (
    EetMatrix, WorkloadTrace, WorkloadMix, synth_bag, true_speedup,
    row_speedups, col_speedups, arithmetic_mean_speedup, harmonic_mean_speedup,
    error_bound, one_busy_regime_speedup, simulate, exhaustive_min_makespan,
)

row = EetMatrix.from_rows([[1.0, 2.0, 3.0]])
alphas = row_speedups(row, 0)

###############################################################################
# Saturated bag of tasks: every machine stays busy, so speedups add up.
c = 999
gamma = true_speedup(row, WorkloadTrace.bag(["T1"] * c))
print(f"saturated   {gamma:.4f}  arithmetic {arithmetic_mean_speedup(alphas):.4f}  "
      f"bound {error_bound(alphas, c):.4f}")

###############################################################################
# One machine busy at a time: times add up, so the harmonic mean wins.
print(f"one busy    {one_busy_regime_speedup(row, 3):.4f}  harmonic {harmonic_mean_speedup(alphas):.4f}")

###############################################################################
# One machine, several task types: the weighted harmonic mean of the
# column speedups.
col = EetMatrix.from_rows([[2.0], [5.0], [1.0]])
mix = WorkloadMix((0.5, 0.3, 0.2))
trace = synth_bag(1000, mix, seed=1, labels=col.task_labels)
print(f"task mix    {true_speedup(col, trace):.4f}  weighted harmonic "
      f"{harmonic_mean_speedup(col_speedups(col, 0), mix):.4f}")

###############################################################################
# Free-machine dispatch is not always makespan-optimal on small bags.
# The first task lands on the slow machine and holds it for 10 s.
pair = EetMatrix.from_rows([[10.0, 1.0]])
print("greedy", simulate(pair, WorkloadTrace.bag(["T1", "T1"])).makespan,
      "best", exhaustive_min_makespan(pair, 2))
