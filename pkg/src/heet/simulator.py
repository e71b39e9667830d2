"""Discrete-event simulation of a single FCFS queue feeding a set of machines.

Tasks join one unbounded queue on arrival. Whenever a machine is free and
the queue is not empty, the head of the queue starts on a free machine.
Events sharing a timestamp are handled together: completions first, then
arrivals, then dispatch. A machine freed at ``t`` can therefore take a task
that arrives at ``t``.

Two dispatch rules pick among free machines:

``"lowest"``
    the free machine with the lowest index (default).
``"rotate"``
    the first free machine at or after a cursor that advances past each
    machine it assigns to (strict round-robin by index).
"""
from __future__ import annotations

import heapq
import itertools
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Literal

import numpy as np

from .eet import EetMatrix
from .errors import HeetError
from .measure import homogeneous_counterpart
from .workload import TaskRecord, WorkloadTrace

Dispatch = Literal["lowest", "rotate"]


@dataclass(frozen=True)
class NoiseSpec:
    """Multiplicative mean-one lognormal noise on execution times."""

    mode: Literal["none", "multiplicative"] = "none"
    coefficient_of_variation: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("none", "multiplicative"):
            raise HeetError(f"unknown noise mode {self.mode!r}")
        cov = self.coefficient_of_variation
        if not (math.isfinite(cov) and cov >= 0):
            raise HeetError("coefficient of variation must be >= 0")

    @classmethod
    def off(cls) -> "NoiseSpec":
        return cls()

    @classmethod
    def lognormal(cls, cov: float, seed: int = 0) -> "NoiseSpec":
        return cls("multiplicative" if cov > 0 else "none", cov, seed)

    @property
    def active(self) -> bool:
        return self.mode == "multiplicative" and self.coefficient_of_variation > 0


@dataclass
class SimMachine:
    machine_index: int
    busy_until: float = 0.0
    tasks_completed: int = 0
    busy_time: float = 0.0


@dataclass(frozen=True)
class SimResult:
    makespan: float
    throughput: float
    completed: int
    per_machine: tuple[SimMachine, ...]
    events: tuple[dict, ...] | None = field(default=None, compare=False)

    @property
    def counts(self) -> list[int]:
        return [pm.tasks_completed for pm in self.per_machine]

    def to_dict(self) -> dict:
        return {
            "makespan": self.makespan,
            "throughput": self.throughput,
            "completed": self.completed,
            "per_machine": [asdict(pm) for pm in self.per_machine],
        }

    def events_jsonl(self) -> str:
        if self.events is None:
            return ""
        return "".join(json.dumps(e) + "\n" for e in self.events)


def _noise_factors(noise: NoiseSpec, c: int) -> np.ndarray | None:
    if not noise.active:
        return None
    sigma2 = math.log1p(noise.coefficient_of_variation**2)
    rng = np.random.default_rng(noise.seed)
    return rng.lognormal(-sigma2 / 2, math.sqrt(sigma2), size=c)


def simulate(
    eet: EetMatrix,
    trace: WorkloadTrace,
    noise: NoiseSpec | None = None,
    dispatch: Dispatch = "lowest",
    record_events: bool = False,
) -> SimResult:
    """Run ``trace`` through the queue and return makespan and per-machine stats.

    With noise active, task ``k`` (in trace order) takes its EET entry times
    the ``k``-th lognormal draw of the seeded stream.
    """
    noise = noise or NoiseSpec.off()
    if dispatch not in ("lowest", "rotate"):
        raise HeetError(f"unknown dispatch rule {dispatch!r}")
    records = trace.records
    c = len(records)
    if c == 0:
        raise HeetError("empty trace")
    kinds = [eet.task_index(r.type) for r in records]
    factors = _noise_factors(noise, c)
    entries = eet.entries
    n = eet.n

    machines = [SimMachine(j) for j in range(n)]
    free = list(range(n))  # min-heap of free machine indices
    running: list[tuple[float, int, int]] = []  # (finish, machine, task)
    queue: list[int] = []
    head = 0
    nxt = 0
    cursor = 0
    events: list[dict] | None = [] if record_events else None
    makespan = 0.0

    def pick() -> int:
        nonlocal cursor
        if dispatch == "lowest":
            return heapq.heappop(free)
        j = min(free, key=lambda k: (k - cursor) % n)
        free.remove(j)
        heapq.heapify(free)
        cursor = (j + 1) % n
        return j

    while nxt < c or running:
        t_done = running[0][0] if running else math.inf
        t_arr = records[nxt].t if nxt < c else math.inf
        now = min(t_done, t_arr)
        while running and running[0][0] == now:
            _, j, task = heapq.heappop(running)
            heapq.heappush(free, j)
            makespan = now
            if events is not None:
                events.append({"t": now, "event": "complete", "task_id": task, "machine": j})
        while nxt < c and records[nxt].t == now:
            queue.append(nxt)
            if events is not None:
                events.append({"t": now, "event": "arrive", "task_id": nxt, "machine": None})
            nxt += 1
        while free and head < len(queue):
            task = queue[head]
            head += 1
            j = pick()
            duration = float(entries[kinds[task], j])
            if factors is not None:
                duration *= float(factors[task])
            mc = machines[j]
            mc.busy_until = now + duration
            mc.busy_time += duration
            mc.tasks_completed += 1
            heapq.heappush(running, (mc.busy_until, j, task))
            if events is not None:
                events.append({"t": now, "event": "start", "task_id": task, "machine": j})

    return SimResult(
        makespan=makespan,
        throughput=c / makespan,
        completed=sum(mc.tasks_completed for mc in machines),
        per_machine=tuple(machines),
        events=tuple(events) if events is not None else None,
    )


def true_speedup(eet: EetMatrix, trace: WorkloadTrace, dispatch: Dispatch = "lowest") -> float:
    """Makespan of the all-slowest counterpart over the real makespan, noise off."""
    hetero = simulate(eet, trace, dispatch=dispatch).makespan
    homo = simulate(homogeneous_counterpart(eet), trace, dispatch=dispatch).makespan
    return homo / hetero


def _single_type(eet_row: EetMatrix) -> np.ndarray:
    if eet_row.m != 1:
        raise HeetError(f"expected a single task type, got {eet_row.m}")
    return eet_row.entries[0]


def one_busy_trace(times, c: int, dispatch: Dispatch = "rotate") -> WorkloadTrace:
    """Arrivals spaced so each task arrives exactly when the previous one ends.

    ``times`` are the per-machine execution times; the machine that will run
    task ``k`` is predicted with the same rule ``simulate`` applies when every
    machine is idle.
    """
    times = np.asarray(times, dtype=float)
    n = times.size
    t = 0.0
    recs = []
    for k in range(c):
        recs.append(TaskRecord(t, "task"))
        j = k % n if dispatch == "rotate" else 0
        t += float(times[j])
    return WorkloadTrace(tuple(recs))


def one_busy_regime_speedup(eet_row: EetMatrix, c: int, dispatch: Dispatch = "rotate") -> float:
    """Measured true speedup when exactly one machine is busy at any time.

    ``dispatch="rotate"`` cycles machines by index and reproduces the harmonic
    mean of the row speedups. ``"lowest"`` (cycling by availability) keeps
    reusing machine 0 because every machine is idle at each arrival.
    """
    times = _single_type(eet_row)
    n = times.size
    if c < 1 or c % n:
        raise HeetError(f"task count {c} is not a positive multiple of n={n}")
    label = eet_row.task_labels[0]
    homo = homogeneous_counterpart(eet_row)

    def run(matrix: EetMatrix) -> float:
        trace = one_busy_trace(matrix.entries[0], c, dispatch)
        trace = WorkloadTrace(tuple(TaskRecord(r.t, label) for r in trace))
        res = simulate(matrix, trace, dispatch=dispatch)
        return res.makespan

    return run(homo) / run(eet_row)


MAX_EXHAUSTIVE_N = 4
MAX_EXHAUSTIVE_C = 12


def exhaustive_min_makespan(eet_row: EetMatrix, c: int) -> float:
    """Minimum over every split of ``c`` identical tasks of the busiest machine's time."""
    times = _single_type(eet_row)
    n = times.size
    if n > MAX_EXHAUSTIVE_N or c > MAX_EXHAUSTIVE_C:
        raise HeetError(
            f"instance too large for enumeration (n={n} > {MAX_EXHAUSTIVE_N} "
            f"or c={c} > {MAX_EXHAUSTIVE_C})"
        )
    if c < 1:
        raise HeetError("task count must be >= 1")
    # tasks are identical, so an assignment is fully described by its counts
    best = math.inf
    for assignment in itertools.combinations_with_replacement(range(n), c):
        counts = np.bincount(assignment, minlength=n)
        best = min(best, float(np.max(counts * times)))
    return best
