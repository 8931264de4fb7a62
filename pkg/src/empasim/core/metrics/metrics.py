"""Speedup and parallelization metrics."""

import logging
from typing import Optional

from ..errors import MetricDomainError
from ..models import ModeResult, RunMode

logger = logging.getLogger(__name__)

DEFAULT_RECYCLE_LATENCY = 30


def speedup(t_base: int, t: int) -> float:
    """
    Ratio of execution times.

    Args:
        t_base: Clocks of the baseline run
        t: Clocks of the measured run

    Returns:
        float: t_base / t

    Raises:
        MetricDomainError: If either time is below one clock
    """
    if t_base < 1 or t < 1:
        raise MetricDomainError(f"execution times must be at least one clock, got {t_base} and {t}")
    return t_base / t


def alpha_eff(k: int, s: float) -> float:
    """
    Effective parallelization (k/(k-1)) * ((S-1)/S).

    Args:
        k: Number of cores, at least 2
        s: Measured speedup, positive

    Returns:
        float: The effective parallelization

    Raises:
        MetricDomainError: If k < 2 or S <= 0
    """
    if k < 2:
        raise MetricDomainError(f"effective parallelization is undefined for k={k}")
    if s <= 0:
        raise MetricDomainError(f"speedup must be positive, got {s}")
    return (k / (k - 1)) * ((s - 1) / s)


def effective_cores(requested: int, recycle_latency: int = DEFAULT_RECYCLE_LATENCY) -> int:
    """Cores that can actually run at once when a core is recycled after ``recycle_latency`` clocks."""
    if requested < 1:
        raise MetricDomainError(f"requested cores must be at least 1, got {requested}")
    return min(requested, recycle_latency + 1)


def mode_result(
    length: int,
    mode: RunMode,
    clocks: int,
    peak_cores: int,
    baseline_clocks: Optional[int] = None,
    recycle_latency: int = DEFAULT_RECYCLE_LATENCY,
) -> ModeResult:
    """
    Build a table row from a run against its NO-mode baseline.

    Args:
        length: Vector length
        mode: Mode of the measured run
        clocks: Clocks of the measured run
        peak_cores: Peak cores of the measured run
        baseline_clocks: Clocks of the NO-mode run of the same length; ``clocks`` when None
        recycle_latency: Recycling latency bounding the effective core count

    Returns:
        ModeResult: The row; alpha_eff is None when only one core was used
    """
    base = clocks if baseline_clocks is None else baseline_clocks
    s = speedup(base, clocks)
    k = effective_cores(peak_cores, recycle_latency)
    alpha = alpha_eff(k, s) if k >= 2 else None
    return ModeResult(
        length=length,
        mode=mode,
        clocks=clocks,
        k=peak_cores,
        speedup=s,
        s_over_k=s / k,
        alpha_eff=alpha,
    )
