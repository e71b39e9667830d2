"""
Scoring a small heterogeneous cluster
=====================================

Two task types and two machines, one of them twice as fast on everything.
We walk through each stage of the score and check the closed form.
"""

import numpy as np
from heet import EetMatrix, heet_score, row_speedups, col_speedups, baseline_means

eet = EetMatrix.from_rows([[4, 2], [8, 4]], machine_labels=["slow", "fast"])
print(eet.to_csv())

###############################################################################
# Row speedups compare machines on one task type, column speedups compare
# task types on one machine.
print("alpha(T1):", row_speedups(eet, 0).values)
print("beta(fast):", col_speedups(eet, 1).values)

###############################################################################
# The report keeps every intermediate. ``equiv_times`` is the mix-weighted
# average time per machine, and HEET is their harmonic mean.
report = heet_score(eet)
for key, value in report.to_dict(tasks=1000).items():
    print(f"{key:>22}: {value}")

e_star = report.equiv_times
print("harmonic mean of e*:", len(e_star) / np.sum(1 / np.asarray(e_star)))

###############################################################################
# Plain means of the raw entries give a different answer.
print(baseline_means(eet))
