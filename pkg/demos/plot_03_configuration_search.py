"""
Cheapest inference cluster for a throughput target
==================================================

Sweep every mix of up to four instances of three types, predict throughput
with HEET, and check the prediction against simulation.
"""

import numpy as np
from heet import WorkloadMix, synth_bag, sweep, optimize, with_simulation
from heet.catalogs import inference_catalog

catalog = inference_catalog()
mix = WorkloadMix.uniform(len(catalog.task_labels))
rows = sweep(catalog, mix, target_throughput=20.0, c=1000)
print(f"{len(rows)} configurations")

best = optimize(rows)
print("cheapest meeting 20 tasks/s:", best.to_dict(catalog))

###############################################################################
# How good are the predictions? Run the same bag through every configuration.
trace = synth_bag(1000, mix, seed=7, labels=catalog.task_labels)
rows = with_simulation(rows, catalog, trace)
err = np.array([abs(r.predicted_makespan - r.simulated_makespan) / r.simulated_makespan for r in rows])
print(f"relative makespan error: mean {err.mean():.4f}, worst {err.max():.4f}")

###############################################################################
# The cheapest few qualifying configurations.
ok = sorted((r for r in rows if r.meets_target), key=lambda r: r.cost)[:5]
for r in ok:
    print(r.config.as_dict(catalog), f"cost {r.cost:.3f}",
          f"theta {r.predicted_throughput:.2f}", f"sim {r.simulated_throughput:.2f}")
