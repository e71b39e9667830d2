"""Speedup vectors, their means, and the HEET reduction of an EET matrix.

The reduction runs in stages:

1. column speedups: each task type's speedup over the slowest task type on
   the same machine;
2. each column collapses to its mix-weighted harmonic mean;
3. equivalent task times ``e*_j`` = slowest time on machine ``j`` divided by
   that mean (equal to the mix-weighted average of the column);
4. row speedups of ``e*`` over the slowest machine;
5. their arithmetic mean;
6. HEET = slowest ``e*`` divided by that mean.

Stages 4-6 make HEET the harmonic mean of ``e*``, which is what ties the
score to throughput: ``n / HEET == sum(1 / e*_j)``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Literal, Sequence

import numpy as np

from .eet import EetMatrix, WorkloadMix, resolve_mix
from .errors import HeetError


@dataclass(frozen=True)
class SpeedupVector:
    values: tuple[float, ...]
    axis: Literal["row", "column"]
    index: int

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise HeetError("speedup vector is empty")
        if min(vals) < 1.0 or 1.0 not in vals:
            raise HeetError(f"not a speedup vector (min must be exactly 1): {vals}")
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.array(self.values)


def _speedups(times: np.ndarray) -> np.ndarray:
    slowest = times.max()
    out = slowest / times
    # exact 1 for every element tied with the max
    out[times == slowest] = 1.0
    return out


def row_speedups(eet: EetMatrix, task_index: int) -> SpeedupVector:
    """Speedup of every machine over the slowest machine for one task type."""
    if not 0 <= task_index < eet.m:
        raise HeetError(f"task index {task_index} out of range [0, {eet.m})")
    return SpeedupVector(tuple(_speedups(eet.entries[task_index])), "row", task_index)


def col_speedups(eet: EetMatrix, machine_index: int) -> SpeedupVector:
    """Speedup of every task type over the slowest task type on one machine."""
    if not 0 <= machine_index < eet.n:
        raise HeetError(f"machine index {machine_index} out of range [0, {eet.n})")
    return SpeedupVector(
        tuple(_speedups(eet.entries[:, machine_index])), "column", machine_index
    )


def _values(v) -> np.ndarray:
    arr = v.as_array() if isinstance(v, SpeedupVector) else np.asarray(v, dtype=float)
    if arr.size == 0:
        raise HeetError("mean of an empty vector")
    return arr


def arithmetic_mean_speedup(v: SpeedupVector | Sequence[float]) -> float:
    return float(math.fsum(_values(v)) / _values(v).size)


def harmonic_mean_speedup(
    v: SpeedupVector | Sequence[float],
    weights: WorkloadMix | Sequence[float] | None = None,
) -> float:
    """Weighted harmonic mean ``1 / sum(w_i / v_i)``; uniform weights by default.

    Weights need not be normalised, but at least one must be positive.
    """
    vals = _values(v)
    if weights is None:
        w = np.full(vals.size, 1.0 / vals.size)
    else:
        w = weights.as_array() if isinstance(weights, WorkloadMix) else np.asarray(weights, dtype=float)
        if w.size != vals.size:
            raise HeetError(f"{w.size} weights for {vals.size} values")
        if np.any(w < 0):
            raise HeetError("negative weight")
        total = w.sum()
        if total <= 0:
            raise HeetError("all weights are zero")
        w = w / total
    return float(1.0 / math.fsum(w / vals))


def column_means(eet: EetMatrix, mix: WorkloadMix | None = None) -> np.ndarray:
    """Mix-weighted harmonic mean of each column speedup vector."""
    mix = resolve_mix(mix, eet.m)
    return np.array([harmonic_mean_speedup(col_speedups(eet, j), mix) for j in range(eet.n)])


def equivalent_task_times(eet: EetMatrix, mix: WorkloadMix | None = None) -> np.ndarray:
    """Execution time of the equivalent task type on every machine."""
    mix = resolve_mix(mix, eet.m)
    return eet.entries.max(axis=0) / column_means(eet, mix)


@dataclass(frozen=True)
class HeetReport:
    """Every intermediate of the HEET reduction plus the derived predictions."""

    task_labels: tuple[str, ...]
    machine_labels: tuple[str, ...]
    mix: tuple[float, ...]
    beta_bar: tuple[float, ...]
    equiv_times: tuple[float, ...]
    alpha_star: tuple[float, ...]
    alpha_star_mean: float
    heet: float
    s_heet: float
    predicted_throughput: float

    @property
    def n(self) -> int:
        return len(self.machine_labels)

    def predicted_makespan(self, c: int) -> float:
        return predict_makespan(self, c, self.n)

    def to_dict(self, tasks: int | None = None) -> dict:
        d = asdict(self)
        d = {k: list(v) if isinstance(v, tuple) else v for k, v in d.items()}
        d["n"] = self.n
        if tasks is not None:
            d["tasks"] = tasks
            d["predicted_makespan"] = self.predicted_makespan(tasks)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "HeetReport":
        kwargs = {}
        for name in cls.__dataclass_fields__:
            v = d[name]
            kwargs[name] = tuple(v) if isinstance(v, list) else v
        return cls(**kwargs)


def heet_score(eet: EetMatrix, mix: WorkloadMix | Sequence[float] | None = None) -> HeetReport:
    mix = resolve_mix(mix, eet.m)
    beta_bar = column_means(eet, mix)
    equiv = eet.entries.max(axis=0) / beta_bar
    alpha_star = _speedups(equiv)
    alpha_mean = arithmetic_mean_speedup(alpha_star)
    heet = float(equiv.max() / alpha_mean)
    n = eet.n
    return HeetReport(
        task_labels=eet.task_labels,
        machine_labels=eet.machine_labels,
        mix=mix.weights,
        beta_bar=tuple(beta_bar.tolist()),
        equiv_times=tuple(equiv.tolist()),
        alpha_star=tuple(alpha_star.tolist()),
        alpha_star_mean=alpha_mean,
        heet=heet,
        s_heet=heet / n,
        predicted_throughput=n / heet,
    )


def _check_n(report: HeetReport, n: int) -> None:
    if n != report.n:
        raise HeetError(f"report describes {report.n} machines, got n={n}")


def predict_makespan(report: HeetReport, c: int, n: int) -> float:
    """Makespan of ``c`` tasks on the equivalent homogeneous system."""
    _check_n(report, n)
    if c < 1:
        raise HeetError("task count must be >= 1")
    return c / n * report.heet


def predict_throughput(report: HeetReport, n: int) -> float:
    _check_n(report, n)
    return n / report.heet


def baseline_means(eet: EetMatrix) -> dict[str, float]:
    """Arithmetic, harmonic and geometric means over all EET entries."""
    flat = eet.entries.ravel()
    return {
        "arithmetic": float(math.fsum(flat) / flat.size),
        "harmonic": float(flat.size / math.fsum(1.0 / flat)),
        "geometric": float(math.exp(math.fsum(np.log(flat)) / flat.size)),
    }


def homogeneous_counterpart(eet: EetMatrix) -> EetMatrix:
    """Same-shape matrix with every entry set to the slowest entry."""
    return EetMatrix(
        eet.task_labels, eet.machine_labels, np.full(eet.shape, eet.entries.max())
    )


def error_bound(row_alphas: SpeedupVector | Sequence[float], c: int) -> float:
    """Upper bound on the relative gap between mean and true speedup for ``c`` tasks."""
    if c < 1:
        raise HeetError("task count must be >= 1")
    return math.fsum(_values(row_alphas)) / c
