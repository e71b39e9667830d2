"""Randomised checks of the speedup-mean results against the simulator.

Each check draws small random instances, measures a true speedup (or
makespan) by simulation, and compares it with the closed form it is
supposed to equal:

- saturation: bag-of-tasks speedup vs the arithmetic mean of row speedups,
  within ``error_bound``;
- round-robin optimality: simulated makespan vs exhaustive enumeration;
- one busy machine: rotated one-at-a-time speedup vs the harmonic mean;
- task mix: single-machine speedup vs the mix-weighted harmonic mean of
  column speedups, within ``1/c``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .eet import EetMatrix, WorkloadMix
from .measure import (
    arithmetic_mean_speedup,
    col_speedups,
    error_bound,
    harmonic_mean_speedup,
    row_speedups,
)
from .simulator import (
    MAX_EXHAUSTIVE_C,
    MAX_EXHAUSTIVE_N,
    exhaustive_min_makespan,
    one_busy_regime_speedup,
    simulate,
    true_speedup,
)
from .workload import WorkloadTrace, synth_bag

ENTRY_RANGE = (0.5, 20.0)
FLOAT_RTOL = 1e-9


@dataclass
class LemmaCheck:
    name: str
    cases: int = 0
    failures: list[dict] = field(default_factory=list)
    worst: float = 0.0  # largest observed gap (check-specific units)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "cases": self.cases,
            "failed": len(self.failures),
            "worst": self.worst,
            "first_failures": self.failures[:5],
        }


def _row(rng: np.random.Generator, n: int) -> EetMatrix:
    return EetMatrix.from_rows([rng.uniform(*ENTRY_RANGE, size=n)])


def _n(rng, machines, lo, hi) -> int:
    return machines if machines is not None else int(rng.integers(lo, hi + 1))


def check_saturation(trials=100, c=1000, seed=0, machines=None) -> LemmaCheck:
    rng = np.random.default_rng(seed)
    out = LemmaCheck("saturation/arithmetic")
    for _ in range(trials):
        row = _row(rng, _n(rng, machines, 2, 6))
        alphas = row_speedups(row, 0)
        gamma = true_speedup(row, WorkloadTrace.bag(["T1"] * c))
        gap = abs(gamma - arithmetic_mean_speedup(alphas)) / gamma
        bound = error_bound(alphas, c)
        out.cases += 1
        out.worst = max(out.worst, gap / bound)
        if gap > bound:
            out.failures.append({"row": row.entries[0].tolist(), "c": c, "gap": gap, "bound": bound})
    return out


def check_round_robin_optimal(trials=50, max_c=MAX_EXHAUSTIVE_C, seed=0, machines=None) -> LemmaCheck:
    """Simulated vs exhaustive makespan for every c <= max_c.

    Equality is up to ``FLOAT_RTOL``: the simulator adds task times one by
    one while the enumeration multiplies counts.
    """
    rng = np.random.default_rng(seed)
    out = LemmaCheck("round-robin optimality")
    max_c = min(max_c, MAX_EXHAUSTIVE_C)
    for _ in range(trials):
        row = _row(rng, _n(rng, machines, 1, MAX_EXHAUSTIVE_N))
        for c in range(1, max_c + 1):
            sim = simulate(row, WorkloadTrace.bag(["T1"] * c)).makespan
            best = exhaustive_min_makespan(row, c)
            out.cases += 1
            out.worst = max(out.worst, (sim - best) / best)
            if abs(sim - best) > FLOAT_RTOL * best:
                out.failures.append({"row": row.entries[0].tolist(), "c": c, "simulated": sim, "optimal": best})
    return out


def check_one_busy(trials=100, seed=0, machines=None) -> LemmaCheck:
    rng = np.random.default_rng(seed)
    out = LemmaCheck("one-busy/harmonic")
    for _ in range(trials):
        n = _n(rng, machines, 1, 6)
        row = _row(rng, n)
        c = n * int(rng.integers(1, 20))
        gamma = one_busy_regime_speedup(row, c)
        expected = harmonic_mean_speedup(row_speedups(row, 0))
        gap = abs(gamma - expected) / expected
        out.cases += 1
        out.worst = max(out.worst, gap)
        if gap > FLOAT_RTOL:
            out.failures.append({"row": row.entries[0].tolist(), "c": c, "gamma": gamma, "harmonic": expected})
    return out


def check_task_mix(trials=100, c=1000, seed=0, task_types=(2, 6)) -> LemmaCheck:
    """Single machine, random mix of ``c`` tasks.

    The mix is the workload's own type proportions (random counts over ``c``),
    so ``synth_bag`` realises it exactly.
    """
    rng = np.random.default_rng(seed)
    out = LemmaCheck("task-mix/weighted-harmonic")
    for k in range(trials):
        m = int(rng.integers(task_types[0], task_types[1] + 1))
        col = EetMatrix.from_rows(rng.uniform(*ENTRY_RANGE, size=(m, 1)))
        counts = rng.multinomial(c, rng.dirichlet(np.ones(m)))
        mix = WorkloadMix.normalized(counts)
        trace = synth_bag(c, mix, seed=k, labels=col.task_labels)
        gamma = true_speedup(col, trace)
        expected = harmonic_mean_speedup(col_speedups(col, 0), mix)
        gap = abs(gamma - expected) / expected
        out.cases += 1
        out.worst = max(out.worst, gap * c)
        if gap > 1.0 / c:
            out.failures.append({"column": col.entries[:, 0].tolist(), "mix": list(mix.weights), "gap": gap})
    return out


def validate_all(seed=0, c=1000, machines=None, trials=None) -> list[LemmaCheck]:
    kw = {} if trials is None else {"trials": trials}
    return [
        check_saturation(c=c, seed=seed, machines=machines, **kw),
        check_round_robin_optimal(max_c=min(c, MAX_EXHAUSTIVE_C), seed=seed,
                                  machines=None if machines is None else min(machines, MAX_EXHAUSTIVE_N), **kw),
        check_one_busy(seed=seed, machines=machines, **kw),
        check_task_mix(c=c, seed=seed, **kw),
    ]
