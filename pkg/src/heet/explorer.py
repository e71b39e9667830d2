"""Configuration search over a machine catalog.

Every count vector within the catalog bounds is expanded into an EET matrix,
scored with HEET, priced, and checked against a throughput target. The
optimiser returns the cheapest configuration that meets the target.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .eet import EetMatrix, WorkloadMix, resolve_mix
from .errors import HeetError, ParseError
from .measure import heet_score
from .simulator import NoiseSpec, simulate
from .workload import WorkloadTrace


@dataclass(frozen=True)
class MachineType:
    label: str
    unit_cost: float
    eet_column: tuple[float, ...]
    max_count: int

    def __post_init__(self):
        col = tuple(float(x) for x in self.eet_column)
        if not self.label:
            raise HeetError("machine type needs a label")
        if not (self.unit_cost >= 0 and math.isfinite(self.unit_cost)):
            raise HeetError(f"{self.label}: unit cost must be >= 0")
        if not col or any(not (x > 0 and math.isfinite(x)) for x in col):
            raise HeetError(f"{self.label}: execution times must be positive")
        if int(self.max_count) != self.max_count or self.max_count < 0:
            raise HeetError(f"{self.label}: max_count must be a non-negative integer")
        object.__setattr__(self, "eet_column", col)
        object.__setattr__(self, "max_count", int(self.max_count))


@dataclass(frozen=True)
class MachineCatalog:
    task_labels: tuple[str, ...]
    machines: tuple[MachineType, ...]

    def __post_init__(self):
        object.__setattr__(self, "task_labels", tuple(self.task_labels))
        object.__setattr__(self, "machines", tuple(self.machines))
        if not self.machines:
            raise HeetError("empty catalog")
        labels = [mt.label for mt in self.machines]
        if len(set(labels)) != len(labels):
            raise HeetError(f"duplicate machine types: {labels}")
        for mt in self.machines:
            if len(mt.eet_column) != len(self.task_labels):
                raise HeetError(
                    f"{mt.label}: {len(mt.eet_column)} times for "
                    f"{len(self.task_labels)} task types"
                )
        if all(mt.max_count < 1 for mt in self.machines):
            raise HeetError("catalog allows no machines")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(mt.label for mt in self.machines)

    @property
    def grid_size(self) -> int:
        return math.prod(mt.max_count + 1 for mt in self.machines) - 1

    def to_dict(self) -> dict:
        return {
            "task_labels": list(self.task_labels),
            "machines": [
                {
                    "label": mt.label,
                    "unit_cost": mt.unit_cost,
                    "eet_column": list(mt.eet_column),
                    "max_count": mt.max_count,
                }
                for mt in self.machines
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MachineCatalog":
        try:
            return cls(
                tuple(d["task_labels"]),
                tuple(
                    MachineType(m["label"], float(m["unit_cost"]), tuple(m["eet_column"]), m["max_count"])
                    for m in d["machines"]
                ),
            )
        except (KeyError, TypeError) as exc:
            raise ParseError(f"bad catalog: missing or malformed field {exc}") from None

    @classmethod
    def load_json(cls, path) -> "MachineCatalog":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad catalog JSON: {exc.msg}", line=exc.lineno) from None
        return cls.from_dict(data)


@dataclass(frozen=True)
class SystemConfig:
    counts: tuple[int, ...]

    def __post_init__(self):
        counts = tuple(int(x) for x in self.counts)
        if any(x < 0 for x in counts):
            raise HeetError(f"negative machine count in {counts}")
        object.__setattr__(self, "counts", counts)

    @property
    def n(self) -> int:
        return sum(self.counts)

    def check(self, catalog: MachineCatalog) -> None:
        if len(self.counts) != len(catalog.machines):
            raise HeetError(f"{len(self.counts)} counts for {len(catalog.machines)} catalog types")
        for k, mt in zip(self.counts, catalog.machines):
            if k > mt.max_count:
                raise HeetError(f"{mt.label}: count {k} exceeds max_count {mt.max_count}")
        if self.n == 0:
            raise HeetError("configuration has no machines")

    def cost(self, catalog: MachineCatalog) -> float:
        return math.fsum(k * mt.unit_cost for k, mt in zip(self.counts, catalog.machines))

    def as_dict(self, catalog: MachineCatalog) -> dict[str, int]:
        return dict(zip(catalog.labels, self.counts))


def expand_config(
    catalog: MachineCatalog, config: SystemConfig, task_labels: Sequence[str] | None = None
) -> EetMatrix:
    """One column per machine instance, labelled ``<type>#<k>``."""
    config.check(catalog)
    cols, labels = [], []
    for k, mt in zip(config.counts, catalog.machines):
        for r in range(k):
            cols.append(mt.eet_column)
            labels.append(f"{mt.label}#{r + 1}")
    tasks = tuple(task_labels) if task_labels is not None else catalog.task_labels
    return EetMatrix(tasks, tuple(labels), np.array(cols).T)


@dataclass(frozen=True)
class SweepRow:
    config: SystemConfig
    heet: float
    s_heet: float
    predicted_throughput: float
    predicted_makespan: float
    cost: float
    meets_target: bool
    simulated_makespan: float | None = None
    simulated_throughput: float | None = None

    @property
    def n(self) -> int:
        return self.config.n

    def to_dict(self, catalog: MachineCatalog | None = None) -> dict:
        d = {
            "counts": self.config.as_dict(catalog) if catalog else list(self.config.counts),
            "n": self.n,
            "heet": self.heet,
            "s_heet": self.s_heet,
            "theta": self.predicted_throughput,
            "tau": self.predicted_makespan,
            "cost": self.cost,
            "meets_target": self.meets_target,
        }
        if self.simulated_makespan is not None:
            d["sim_makespan"] = self.simulated_makespan
            d["sim_theta"] = self.simulated_throughput
        return d


def enumerate_configs(catalog: MachineCatalog) -> list[SystemConfig]:
    """Every count vector within bounds except the empty one, lexicographic."""
    ranges = [range(mt.max_count + 1) for mt in catalog.machines]
    return [SystemConfig(c) for c in itertools.product(*ranges) if sum(c) > 0]


def _score(catalog, mix, target, c, config) -> SweepRow:
    eet = expand_config(catalog, config)
    report = heet_score(eet, mix)
    theta = report.predicted_throughput
    return SweepRow(
        config=config,
        heet=report.heet,
        s_heet=report.s_heet,
        predicted_throughput=theta,
        predicted_makespan=report.predicted_makespan(c),
        cost=config.cost(catalog),
        meets_target=theta >= target,
    )


def sweep(
    catalog: MachineCatalog,
    mix: WorkloadMix | Sequence[float] | None,
    target_throughput: float,
    c: int,
    workers: int = 1,
) -> list[SweepRow]:
    """Score every configuration; rows come back in lexicographic count order."""
    if not (target_throughput > 0 and math.isfinite(target_throughput)):
        raise HeetError("throughput target must be positive")
    if c < 1:
        raise HeetError("task count must be >= 1")
    mix = resolve_mix(mix, len(catalog.task_labels))
    configs = enumerate_configs(catalog)

    def score(cfg):
        return _score(catalog, mix, target_throughput, c, cfg)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(score, configs))
    return [score(cfg) for cfg in configs]


def with_simulation(
    rows: Sequence[SweepRow],
    catalog: MachineCatalog,
    trace: WorkloadTrace,
    noise: NoiseSpec | None = None,
) -> list[SweepRow]:
    """Attach measured makespan and throughput for ``trace`` to every row."""
    out = []
    for row in rows:
        res = simulate(expand_config(catalog, row.config), trace, noise)
        out.append(replace(row, simulated_makespan=res.makespan, simulated_throughput=res.throughput))
    return out


def optimize(rows: Sequence[SweepRow], target_throughput: float | None = None) -> SweepRow | None:
    """Cheapest qualifying row; ties go to higher throughput, then lower counts.

    When ``target_throughput`` is given it overrides each row's stored flag.
    """
    best = None
    best_key = None
    for row in rows:
        ok = row.meets_target if target_throughput is None else row.predicted_throughput >= target_throughput
        if not ok:
            continue
        key = (row.cost, -row.predicted_throughput, row.config.counts)
        if best_key is None or key < best_key:
            best, best_key = row, key
    return best


def _num(x) -> str:
    return repr(float(x))


def sweep_csv(rows: Sequence[SweepRow], catalog: MachineCatalog) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    simulated = any(r.simulated_makespan is not None for r in rows)
    header = [*catalog.labels, "n", "heet", "s_heet", "theta", "tau", "cost", "meets_target"]
    if simulated:
        header += ["sim_makespan", "sim_theta"]
    writer.writerow(header)
    for r in rows:
        line = [
            *r.config.counts, r.n, *map(_num, (r.heet, r.s_heet, r.predicted_throughput,
                                               r.predicted_makespan, r.cost)),
            str(r.meets_target).lower(),
        ]
        if simulated:
            line += [_num(r.simulated_makespan), _num(r.simulated_throughput)]
        writer.writerow(line)
    return buf.getvalue()
