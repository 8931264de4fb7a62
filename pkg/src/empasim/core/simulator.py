"""Simulator - facade over the assembler, the machine and the benchmarks."""

import logging
import re
from typing import Iterable, List, Optional, Sequence, Union

from .errors import SimulationFault
from .isa import ObjectImage, assemble, read_object
from .machine import Machine, TimingConfig
from .metrics import TABLE_LENGTHS, compare_with_golden, run_sample, sweep
from .models import ModeResult, RunMode, RunReport
from .programs import vector_for_length
from .settings import SimulatorSettings

logger = logging.getLogger(__name__)

_OBJECT_LINE = re.compile(r"^0x[0-9a-fA-F]+:\s+[0-9a-fA-F]+\s+\|")


def is_object_text(text: str) -> bool:
    """True when ``text`` looks like the output of ``write_object`` rather than assembly source."""
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        return bool(_OBJECT_LINE.match(stripped))
    return False


class Simulator:
    """
    Entry point used by the command line and the web service.

    Holds the machine settings and the timing configuration and runs programs,
    the shipped sample programs and benchmark sweeps with them.
    """

    def __init__(self, settings: Optional[SimulatorSettings] = None, timing: Optional[TimingConfig] = None):
        """
        Initialize the simulator.

        Args:
            settings: Machine settings; read from the environment when None
            timing: Clock costs; loaded from ``settings.timing_path`` when None
        """
        self.settings = settings or SimulatorSettings()
        self.timing = timing or TimingConfig.load(self.settings.timing_path)
        logger.info(
            f"Simulator ready: pool={self.settings.pool_size} "
            f"timing={self.settings.timing_path or 'shipped defaults'}"
        )

    def assemble(self, source: str) -> ObjectImage:
        """Assemble source text into an image."""
        return assemble(source)

    def load_program(self, text: str) -> ObjectImage:
        """
        Turn either object text or assembly source into an image.

        Raises:
            AssemblyError: If the text is neither valid object text nor valid source
        """
        if is_object_text(text):
            logger.debug("Reading program as object text")
            return read_object(text)
        return assemble(text)

    def run(
        self,
        image: ObjectImage,
        pool_size: Optional[int] = None,
        record_trace: bool = True,
        check_invariants: Optional[bool] = None,
    ) -> RunReport:
        """
        Run a loaded program to completion.

        Args:
            image: Assembled program
            pool_size: Number of cores; the configured pool when None
            record_trace: Keep the full event trace in the report
            check_invariants: Verify supervisor invariants every clock; the setting when None

        Returns:
            RunReport: The run outcome

        Raises:
            SimulationFault: On core faults and deadlocks
            ClockBudgetExceededError: If the clock budget runs out
        """
        machine = Machine(
            image,
            pool_size=pool_size or self.settings.pool_size,
            timing=self.timing,
            memory_size=self.settings.memory_size,
            max_clocks=self.settings.max_clocks,
            check_invariants=self.settings.check_invariants if check_invariants is None else check_invariants,
            record_trace=record_trace,
        )
        try:
            return machine.run()
        except SimulationFault as e:
            logger.error(f"Simulation fault at clock {machine.clock}: {e}")
            raise

    def run_sample(
        self,
        mode: Union[RunMode, str],
        values: Optional[Sequence[int]] = None,
        veclen: Optional[int] = None,
        pool_size: Optional[int] = None,
        record_trace: bool = True,
    ) -> RunReport:
        """
        Run one of the shipped sum-up programs.

        Args:
            mode: NO, FOR or SUMUP
            values: Vector elements; takes precedence over ``veclen``
            veclen: Length of the benchmark vector 1..veclen
            pool_size: Number of cores; the configured pool when None
            record_trace: Keep the full event trace in the report

        Returns:
            RunReport: The run outcome

        Raises:
            ValueError: If neither values nor a length is given, or the mode is unknown
        """
        if values is None:
            if veclen is None:
                raise ValueError("either values or veclen is required")
            values = vector_for_length(veclen)
        mode = RunMode(mode.upper() if isinstance(mode, str) else mode)
        return run_sample(
            mode,
            values,
            pool_size=pool_size or self.settings.pool_size,
            timing=self.timing,
            child_limit=self.settings.sumup_child_limit,
            recycle_latency=self.settings.recycle_latency,
            memory_size=self.settings.memory_size,
            max_clocks=self.settings.max_clocks,
            check_invariants=self.settings.check_invariants,
            record_trace=record_trace,
        )

    def sweep(self, lengths: Iterable[int], modes: Iterable[Union[RunMode, str]] = tuple(RunMode)) -> List[ModeResult]:
        """Benchmark rows for every (length, mode) pair, ordered by length then mode."""
        return sweep(
            lengths,
            [RunMode(mode.upper() if isinstance(mode, str) else mode) for mode in modes],
            pool_size=self.settings.pool_size,
            timing=self.timing,
            child_limit=self.settings.sumup_child_limit,
            recycle_latency=self.settings.recycle_latency,
            memory_size=self.settings.memory_size,
            max_clocks=self.settings.max_clocks,
            check_invariants=self.settings.check_invariants,
        )

    def bench(self) -> List[ModeResult]:
        """The twelve rows of the reference efficiency table."""
        return self.sweep(TABLE_LENGTHS, RunMode)

    def check_against_golden(self, results: Optional[Sequence[ModeResult]] = None) -> List[str]:
        """
        Compare benchmark rows with the shipped reference table.

        Args:
            results: Rows to check; runs ``bench`` when None

        Returns:
            List[str]: Differences; empty when everything matches
        """
        if results is None:
            results = self.bench()
        return compare_with_golden(results)
