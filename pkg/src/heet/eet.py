"""Expected Execution Time (EET) matrices and workload mixes.

An EET matrix has one row per task type and one column per machine
instance. Entry ``[i, j]`` is the expected time (seconds) for a task of
type ``i`` on machine ``j``. Several instances of the same machine type
appear as identical columns, labelled ``"<type>#<k>"``.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import HeetError, ParseError

MIX_TOLERANCE = 1e-12


def _check_labels(labels: Sequence[str], axis: str) -> tuple[str, ...]:
    labels = tuple(str(x) for x in labels)
    if not labels:
        raise HeetError(f"EET matrix needs at least one {axis}")
    if any(not x.strip() for x in labels):
        raise HeetError(f"empty {axis} label")
    if len(set(labels)) != len(labels):
        raise HeetError(f"duplicate {axis} labels: {labels}")
    return labels


@dataclass(frozen=True, eq=False)
class EetMatrix:
    task_labels: tuple[str, ...]
    machine_labels: tuple[str, ...]
    entries: np.ndarray

    def __post_init__(self):
        tasks = _check_labels(self.task_labels, "task")
        machines = _check_labels(self.machine_labels, "machine")
        arr = np.array(self.entries, dtype=float)
        if arr.shape != (len(tasks), len(machines)):
            raise HeetError(
                f"entries have shape {arr.shape}, labels imply "
                f"{(len(tasks), len(machines))}"
            )
        if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
            raise HeetError("execution times must be positive and finite")
        arr.setflags(write=False)
        object.__setattr__(self, "task_labels", tasks)
        object.__setattr__(self, "machine_labels", machines)
        object.__setattr__(self, "entries", arr)

    @classmethod
    def from_rows(cls, rows, task_labels=None, machine_labels=None) -> "EetMatrix":
        """Build a matrix from nested lists, generating ``T1..``/``M1..`` labels."""
        arr = np.atleast_2d(np.asarray(rows, dtype=float))
        m, n = arr.shape
        if task_labels is None:
            task_labels = [f"T{i + 1}" for i in range(m)]
        if machine_labels is None:
            machine_labels = [f"M{j + 1}" for j in range(n)]
        return cls(tuple(task_labels), tuple(machine_labels), arr)

    @property
    def m(self) -> int:
        return self.entries.shape[0]

    @property
    def n(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def task_index(self, label: str) -> int:
        try:
            return self.task_labels.index(label)
        except ValueError:
            raise HeetError(f"unknown task type {label!r}") from None

    def scaled(self, k: float) -> "EetMatrix":
        return EetMatrix(self.task_labels, self.machine_labels, self.entries * k)

    def permuted(self, task_order=None, machine_order=None) -> "EetMatrix":
        rows = list(range(self.m)) if task_order is None else list(task_order)
        cols = list(range(self.n)) if machine_order is None else list(machine_order)
        return EetMatrix(
            tuple(self.task_labels[i] for i in rows),
            tuple(self.machine_labels[j] for j in cols),
            self.entries[np.ix_(rows, cols)],
        )

    def with_column(self, values, label: str) -> "EetMatrix":
        """Return a copy with one extra machine column appended."""
        col = np.asarray(values, dtype=float).reshape(self.m, 1)
        return EetMatrix(
            self.task_labels,
            self.machine_labels + (label,),
            np.hstack([self.entries, col]),
        )

    def __eq__(self, other):
        if not isinstance(other, EetMatrix):
            return NotImplemented
        return (
            self.task_labels == other.task_labels
            and self.machine_labels == other.machine_labels
            and np.array_equal(self.entries, other.entries)
        )

    def __hash__(self):
        return hash((self.task_labels, self.machine_labels, self.entries.tobytes()))

    def __repr__(self):
        return (
            f"EetMatrix(tasks={list(self.task_labels)}, "
            f"machines={list(self.machine_labels)}, entries={self.entries.tolist()})"
        )

    # -- CSV ---------------------------------------------------------------

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["task", *self.machine_labels])
        for label, row in zip(self.task_labels, self.entries):
            writer.writerow([label, *(repr(float(x)) for x in row)])
        return buf.getvalue()

    def save_csv(self, path) -> None:
        Path(path).write_text(self.to_csv())

    @classmethod
    def from_csv(cls, text: str) -> "EetMatrix":
        """Parse ``task,<machine>,...`` CSV text.

        Raises ParseError (with a line number) for malformed content and
        HeetError for well-formed content that breaks matrix invariants.
        """
        rows = list(csv.reader(io.StringIO(text)))
        numbered = [(k + 1, r) for k, r in enumerate(rows) if any(c.strip() for c in r)]
        if not numbered:
            raise ParseError("empty EET file", line=1)
        line, header = numbered[0]
        header = [c.strip() for c in header]
        if len(header) < 2 or header[0].lower() != "task":
            raise ParseError("header must be 'task,<machine label>,...'", line=line)
        machines = header[1:]
        tasks, values = [], []
        for line, row in numbered[1:]:
            row = [c.strip() for c in row]
            if len(row) != len(header):
                raise ParseError(
                    f"expected {len(header)} fields, got {len(row)}", line=line
                )
            try:
                vals = [float(c) for c in row[1:]]
            except ValueError:
                raise ParseError(f"non-numeric execution time in {row[1:]}", line=line) from None
            tasks.append(row[0])
            values.append(vals)
        if not tasks:
            raise ParseError("no task rows", line=line + 1)
        return cls(tuple(tasks), tuple(machines), np.array(values))

    @classmethod
    def load_csv(cls, path) -> "EetMatrix":
        return cls.from_csv(Path(path).read_text())


@dataclass(frozen=True)
class WorkloadMix:
    """Per-task-type proportions of a workload (non-negative, summing to 1)."""

    weights: tuple[float, ...] = field()

    def __post_init__(self):
        w = tuple(float(x) for x in self.weights)
        if not w:
            raise HeetError("workload mix is empty")
        if any(not math.isfinite(x) or x < 0 for x in w):
            raise HeetError(f"mix weights must be finite and >= 0: {w}")
        if abs(math.fsum(w) - 1.0) > MIX_TOLERANCE:
            raise HeetError(f"mix weights sum to {math.fsum(w)!r}, not 1")
        object.__setattr__(self, "weights", w)

    @classmethod
    def uniform(cls, m: int) -> "WorkloadMix":
        if m < 1:
            raise HeetError("uniform mix needs m >= 1")
        return cls((1.0 / m,) * m)

    @classmethod
    def normalized(cls, raw: Iterable[float]) -> "WorkloadMix":
        """Scale arbitrary non-negative proportions so they sum to one."""
        raw = [float(x) for x in raw]
        if any(not math.isfinite(x) or x < 0 for x in raw):
            raise HeetError(f"mix weights must be finite and >= 0: {raw}")
        total = math.fsum(raw)
        if total <= 0:
            raise HeetError("mix weights are all zero")
        w = [x / total for x in raw]
        # push the rounding residue into the largest weight
        k = max(range(len(w)), key=w.__getitem__)
        w[k] += 1.0 - math.fsum(w)
        return cls(tuple(w))

    def __len__(self):
        return len(self.weights)

    def as_array(self) -> np.ndarray:
        return np.array(self.weights)


def resolve_mix(mix: WorkloadMix | Sequence[float] | None, m: int) -> WorkloadMix:
    """Default to a uniform mix and check the length against ``m``."""
    if mix is None:
        return WorkloadMix.uniform(m)
    if not isinstance(mix, WorkloadMix):
        mix = WorkloadMix(tuple(mix))
    if len(mix) != m:
        raise HeetError(f"mix has {len(mix)} weights for {m} task types")
    return mix
