"""
Prediction error under execution-time noise
===========================================

Execution times get a mean-one lognormal factor. The prediction stays the
same, so error grows with the spread.
"""

import numpy as np
from heet import NoiseSpec, WorkloadMix, synth_bag, sweep, with_simulation
from heet.catalogs import inference_catalog

catalog = inference_catalog()
mix = WorkloadMix.uniform(len(catalog.task_labels))
rows = sweep(catalog, mix, 1.0, 1000)
trace = synth_bag(1000, mix, seed=7, labels=catalog.task_labels)

for cov in (0.0, 0.25, 0.5, 1.0):
    maes = []
    for seed in range(5):
        sim = with_simulation(rows, catalog, trace, NoiseSpec.lognormal(cov, seed))
        maes.append(np.mean([abs(r.predicted_makespan - r.simulated_makespan) / r.simulated_makespan
                             for r in sim]))
    print(f"CoV {cov:4.2f}  MAE {np.mean(maes):.4f}")
