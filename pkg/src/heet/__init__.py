"""Heterogeneity measurement for compute clusters from EET matrices."""
from .eet import EetMatrix, WorkloadMix
from .errors import HeetError, ParseError
from .explorer import (
    MachineCatalog,
    MachineType,
    SweepRow,
    SystemConfig,
    expand_config,
    optimize,
    sweep,
    with_simulation,
)
from .measure import (
    HeetReport,
    SpeedupVector,
    arithmetic_mean_speedup,
    baseline_means,
    col_speedups,
    equivalent_task_times,
    error_bound,
    harmonic_mean_speedup,
    heet_score,
    homogeneous_counterpart,
    predict_makespan,
    predict_throughput,
    row_speedups,
)
from .simulator import (
    NoiseSpec,
    SimMachine,
    SimResult,
    exhaustive_min_makespan,
    one_busy_regime_speedup,
    simulate,
    true_speedup,
)
from .workload import (
    TaskRecord,
    WorkloadTrace,
    ingest_profile,
    synth_bag,
    synth_poisson_trace,
)

__version__ = "0.1.0"
