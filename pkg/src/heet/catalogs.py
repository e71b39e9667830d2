"""Illustrative machine catalog for an ML inference cluster.

Three instance types and four inference task types. Execution times are
synthetic but ordered like CPU (burstable), CPU (compute-optimised) and GPU
instances; prices are typical on-demand hourly rates. Substitute measured
profiles (see ``workload.ingest_profile``) for real planning.

The speed spread is kept moderate (about 3x between the slowest and fastest
type) so a 1000-task bag keeps every machine busy for many task lengths;
with much faster accelerators the last few tasks on slow machines dominate
the makespan of small bags.
"""
from __future__ import annotations

from .explorer import MachineCatalog, MachineType

TASK_TYPES = ("image_classification", "object_detection", "question_answering", "speech_recognition")


def inference_catalog(max_count: int = 4) -> MachineCatalog:
    """Catalog whose full grid has ``(max_count + 1) ** 3 - 1`` configurations."""
    return MachineCatalog(
        TASK_TYPES,
        (
            MachineType("t2.large", 0.0928, (0.40, 0.80, 0.30, 1.20), max_count),
            MachineType("c5.2xlarge", 0.34, (0.25, 0.50, 0.20, 0.75), max_count),
            MachineType("g4dn.xlarge", 0.526, (0.12, 0.20, 0.10, 0.30), max_count),
        ),
    )
