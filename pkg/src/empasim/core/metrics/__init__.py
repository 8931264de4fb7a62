"""metrics - Speedup, efficiency and effective parallelization, plus benchmark sweeps."""

from .metrics import DEFAULT_RECYCLE_LATENCY, alpha_eff, effective_cores, mode_result, speedup
from .sweep import (
    GOLDEN_TOLERANCE,
    TABLE_LENGTHS,
    compare_with_golden,
    load_golden_table,
    run_sample,
    sweep,
)

__all__ = [
    "DEFAULT_RECYCLE_LATENCY",
    "GOLDEN_TOLERANCE",
    "TABLE_LENGTHS",
    "alpha_eff",
    "compare_with_golden",
    "effective_cores",
    "load_golden_table",
    "mode_result",
    "run_sample",
    "speedup",
    "sweep",
]
