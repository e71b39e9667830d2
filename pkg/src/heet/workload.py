"""Workload traces and profile ingestion.

Traces are ordered ``(arrival_time, task_type)`` records. A bag of tasks is
the special case where every arrival is at time zero.
"""
from __future__ import annotations

import csv
import io
import json
import math
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .eet import EetMatrix, WorkloadMix
from .errors import HeetError, ParseError


@dataclass(frozen=True)
class TaskRecord:
    t: float
    type: str


@dataclass(frozen=True)
class WorkloadTrace:
    records: tuple[TaskRecord, ...]

    def __post_init__(self):
        recs = tuple(
            r if isinstance(r, TaskRecord) else TaskRecord(float(r[0]), str(r[1]))
            for r in self.records
        )
        prev = -math.inf
        for k, r in enumerate(recs):
            if not math.isfinite(r.t) or r.t < 0:
                raise HeetError(f"record {k}: arrival time {r.t!r} is not a finite time >= 0")
            if r.t < prev:
                raise HeetError(f"record {k}: arrival times decrease ({r.t} < {prev})")
            prev = r.t
        object.__setattr__(self, "records", recs)

    @property
    def c(self) -> int:
        return len(self.records)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @property
    def is_bag(self) -> bool:
        return all(r.t == 0 for r in self.records)

    def type_counts(self, labels: Sequence[str]) -> list[int]:
        counts = dict.fromkeys(labels, 0)
        for r in self.records:
            counts[r.type] = counts.get(r.type, 0) + 1
        return [counts[x] for x in labels]

    @classmethod
    def bag(cls, types: Iterable[str]) -> "WorkloadTrace":
        return cls(tuple(TaskRecord(0.0, t) for t in types))

    def to_jsonl(self) -> str:
        return "".join(json.dumps({"t": r.t, "type": r.type}) + "\n" for r in self.records)

    def save_jsonl(self, path) -> None:
        Path(path).write_text(self.to_jsonl())

    @classmethod
    def from_jsonl(cls, text: str) -> "WorkloadTrace":
        records = []
        for k, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                records.append(TaskRecord(float(obj["t"]), str(obj["type"])))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"bad trace record: {exc}", line=k) from None
        return cls(tuple(records))

    @classmethod
    def load_jsonl(cls, path) -> "WorkloadTrace":
        return cls.from_jsonl(Path(path).read_text())


def _check_mix(mix: WorkloadMix | Sequence[float], labels: Sequence[str]) -> WorkloadMix:
    if not isinstance(mix, WorkloadMix):
        mix = WorkloadMix(tuple(mix))
    if len(mix) != len(labels):
        raise HeetError(f"mix has {len(mix)} weights for {len(labels)} task labels")
    return mix


def apportion(c: int, mix: WorkloadMix | Sequence[float]) -> list[int]:
    """Integer type counts summing to ``c`` by largest remainder.

    Remainder ties go to the lowest index.
    """
    if not isinstance(mix, WorkloadMix):
        mix = WorkloadMix(tuple(mix))
    quotas = [c * w for w in mix.weights]
    counts = [math.floor(q) for q in quotas]
    left = c - sum(counts)
    order = sorted(range(len(quotas)), key=lambda i: (-(quotas[i] - counts[i]), i))
    for i in order[:left]:
        counts[i] += 1
    return counts


def synth_bag(
    c: int, mix: WorkloadMix | Sequence[float], seed: int, labels: Sequence[str] | None = None
) -> WorkloadTrace:
    """``c`` tasks at time zero with exact apportioned counts, shuffled by ``seed``."""
    if c < 1:
        raise HeetError("task count must be >= 1")
    labels = list(labels) if labels is not None else [f"T{i + 1}" for i in range(len(mix))]
    mix = _check_mix(mix, labels)
    types = [lab for lab, k in zip(labels, apportion(c, mix)) for _ in range(k)]
    order = np.random.default_rng(seed).permutation(len(types))
    return WorkloadTrace.bag(types[i] for i in order)


def synth_poisson_trace(
    rate: float,
    c: int,
    mix: WorkloadMix | Sequence[float],
    seed: int,
    labels: Sequence[str] | None = None,
) -> WorkloadTrace:
    """Exponential inter-arrival gaps (mean ``1/rate``); types i.i.d. from ``mix``."""
    if not (rate > 0 and math.isfinite(rate)):
        raise HeetError(f"arrival rate must be positive, got {rate!r}")
    if c < 1:
        raise HeetError("task count must be >= 1")
    labels = list(labels) if labels is not None else [f"T{i + 1}" for i in range(len(mix))]
    mix = _check_mix(mix, labels)
    rng = np.random.default_rng(seed)
    times = np.cumsum(rng.exponential(1.0 / rate, size=c))
    kinds = rng.choice(len(labels), size=c, p=mix.as_array())
    return WorkloadTrace(tuple(TaskRecord(float(t), labels[k]) for t, k in zip(times, kinds)))


# -- profiling -------------------------------------------------------------

ProfileSamples = Mapping[tuple[str, str], Sequence[float]]


def ingest_profile(
    samples: ProfileSamples,
    task_labels: Sequence[str] | None = None,
    machine_labels: Sequence[str] | None = None,
) -> EetMatrix:
    """Average measured execution times into an EET matrix.

    Label order defaults to first appearance in ``samples``.
    """
    if task_labels is None:
        task_labels = list(dict.fromkeys(t for t, _ in samples))
    if machine_labels is None:
        machine_labels = list(dict.fromkeys(mc for _, mc in samples))
    if not task_labels or not machine_labels:
        raise HeetError("incomplete profile grid: no samples")
    entries = np.empty((len(task_labels), len(machine_labels)))
    for i, t in enumerate(task_labels):
        for j, mc in enumerate(machine_labels):
            vals = samples.get((t, mc))
            if not vals:
                raise HeetError(f"incomplete profile grid: no samples for ({t}, {mc})")
            if any(not (v > 0 and math.isfinite(v)) for v in vals):
                raise HeetError(f"non-positive sample for ({t}, {mc})")
            entries[i, j] = math.fsum(vals) / len(vals)
    return EetMatrix(tuple(task_labels), tuple(machine_labels), entries)


def parse_profile_csv(text: str) -> dict[tuple[str, str], list[float]]:
    """Read ``task,machine,sample_seconds`` rows (header optional)."""
    samples: dict[tuple[str, str], list[float]] = defaultdict(list)
    for k, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        row = [c.strip() for c in row]
        if not any(row):
            continue
        if k == 1 and row[:3] == ["task", "machine", "sample_seconds"]:
            continue
        if len(row) != 3:
            raise ParseError(f"expected 3 fields, got {len(row)}", line=k)
        try:
            value = float(row[2])
        except ValueError:
            raise ParseError(f"non-numeric sample {row[2]!r}", line=k) from None
        samples[(row[0], row[1])].append(value)
    return dict(samples)
