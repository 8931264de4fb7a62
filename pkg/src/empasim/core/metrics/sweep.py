"""Benchmark sweeps over vector lengths and modes, and the golden table check."""

import csv
import io
import logging
from importlib import resources
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..isa import assemble
from ..machine import DEFAULT_MAX_CLOCKS, DEFAULT_MEMORY_SIZE, Machine, TimingConfig
from ..models import ModeResult, RunMode, RunReport
from ..programs import DEFAULT_CHILD_LIMIT, sample_source, vector_for_length
from .metrics import DEFAULT_RECYCLE_LATENCY, mode_result

logger = logging.getLogger(__name__)

TABLE_LENGTHS = (1, 2, 4, 6)
GOLDEN_TABLE_FILE = "reference_table.csv"
GOLDEN_TOLERANCE = 0.01


def run_sample(
    mode: RunMode,
    values: Sequence[int],
    pool_size: int = 32,
    timing: Optional[TimingConfig] = None,
    child_limit: int = DEFAULT_CHILD_LIMIT,
    recycle_latency: int = DEFAULT_RECYCLE_LATENCY,
    **options,
) -> RunReport:
    """
    Assemble and run one sample program for a vector.

    Args:
        mode: Sample program to run
        values: Vector elements
        pool_size: Number of cores
        timing: Clock costs; shipped defaults when None
        child_limit: Most children a SUMUP program reserves; capped by the pool
        recycle_latency: Recycling latency; SUMUP may hold at most one core more
        **options: Further ``Machine`` keyword arguments

    Returns:
        RunReport: The run outcome
    """
    limit = max(1, min(child_limit, pool_size - 1))
    options.setdefault("sumup_ceiling", recycle_latency + 1)
    image = assemble(sample_source(mode, values, limit))
    return Machine(image, pool_size=pool_size, timing=timing, **options).run()


def sweep(
    lengths: Iterable[int],
    modes: Iterable[RunMode],
    pool_size: int = 32,
    timing: Optional[TimingConfig] = None,
    child_limit: int = DEFAULT_CHILD_LIMIT,
    recycle_latency: int = DEFAULT_RECYCLE_LATENCY,
    memory_size: int = DEFAULT_MEMORY_SIZE,
    max_clocks: int = DEFAULT_MAX_CLOCKS,
    check_invariants: bool = False,
) -> List[ModeResult]:
    """
    Run every (length, mode) pair and compare against the NO-mode baseline.

    Args:
        lengths: Vector lengths; the vector for length L is 1..L
        modes: Modes to report
        pool_size: Number of cores
        timing: Clock costs; shipped defaults when None
        child_limit: Most children the SUMUP program reserves
        recycle_latency: Bound for the effective core count
        memory_size: Bytes of memory per machine
        max_clocks: Clock budget per run
        check_invariants: Verify supervisor invariants every clock

    Returns:
        List[ModeResult]: Rows ordered by (length, mode)

    Raises:
        ValueError: If no lengths or modes are given
    """
    lengths = sorted(set(lengths))
    modes = sorted({RunMode(mode) for mode in modes}, key=lambda mode: mode.rank)
    if not lengths or not modes:
        logger.error("Sweep needs at least one length and one mode")
        raise ValueError("sweep needs at least one length and one mode")
    timing = timing or TimingConfig.default()
    options = dict(
        pool_size=pool_size,
        timing=timing,
        child_limit=child_limit,
        recycle_latency=recycle_latency,
        memory_size=memory_size,
        max_clocks=max_clocks,
        check_invariants=check_invariants,
        record_trace=False,
    )

    results: List[ModeResult] = []
    for length in lengths:
        values = vector_for_length(length)
        baseline = run_sample(RunMode.NO, values, **options)
        for mode in modes:
            report = baseline if mode == RunMode.NO else run_sample(mode, values, **options)
            results.append(mode_result(
                length, mode, report.total_clocks, report.peak_cores,
                baseline_clocks=baseline.total_clocks,
                recycle_latency=recycle_latency,
            ))
        logger.debug(f"Swept length {length}: baseline {baseline.total_clocks} clocks")
    logger.info(f"Sweep finished: {len(results)} rows over {len(lengths)} length(s)")
    return results


def load_golden_table() -> List[Dict[str, str]]:
    """Rows of the shipped reference table, as CSV dictionaries."""
    text = resources.files(__package__).joinpath(GOLDEN_TABLE_FILE).read_text(encoding="utf-8")
    return list(csv.DictReader(io.StringIO(text)))


def compare_with_golden(
    results: Sequence[ModeResult],
    golden: Optional[List[Dict[str, str]]] = None,
    tolerance: float = GOLDEN_TOLERANCE,
) -> List[str]:
    """
    Compare table rows with the reference table.

    Clocks and k must match exactly; S, S/k and alpha_eff within ``tolerance``.

    Returns:
        List[str]: One message per mismatch; empty when everything agrees
    """
    golden = golden if golden is not None else load_golden_table()
    measured: Dict[Tuple[int, str], ModeResult] = {(row.length, row.mode.value): row for row in results}
    deltas = []
    for expected in golden:
        key = (int(expected["length"]), expected["mode"])
        row = measured.get(key)
        label = f"length {key[0]} {key[1]}"
        if row is None:
            deltas.append(f"{label}: missing")
            continue
        for name, actual in (("clocks", row.clocks), ("k", row.k)):
            if actual != int(expected[name]):
                deltas.append(f"{label}: {name} {actual} != {expected[name]}")
        alpha = row.alpha_eff if row.alpha_eff is not None else 1.0
        for name, actual in (("S", row.speedup), ("S_over_k", row.s_over_k), ("alpha_eff", alpha)):
            target = float(expected[name])
            if abs(actual - target) > tolerance:
                deltas.append(f"{label}: {name} {actual:.4f} != {target:.2f}")
    if deltas:
        logger.warning(f"{len(deltas)} difference(s) from the reference table")
    return deltas
