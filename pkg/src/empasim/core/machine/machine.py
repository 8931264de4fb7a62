"""The global clock loop driving the cores and the supervisor."""

import logging
from typing import List, Optional

from ..cores import CoreEventKind, CoreRecord, step_core
from ..errors import (
    ClockBudgetExceededError,
    DeadlockError,
    InvalidInstructionError,
    MachineFinishedError,
    SimulationFault,
)
from ..isa import MetaInstruction, ObjectImage
from ..models import CoreState, RunReport, TraceEvent, TraceEventKind
from ..supervisor import IMPLICIT_QTERM, Supervisor
from ..trace import TraceRecorder
from .memory import DEFAULT_MEMORY_SIZE, Memory
from .timing import TimingConfig

logger = logging.getLogger(__name__)

DEFAULT_POOL_SIZE = 32
DEFAULT_MAX_CLOCKS = 10_000_000


def load(image: ObjectImage, memory: Memory) -> int:
    """
    Copy an image into memory.

    Returns:
        int: The entry address

    Raises:
        MemoryAccessError: If a region falls outside memory
    """
    return memory.load(image)


class Machine:
    """
    One simulated EMPA processor loaded with a program.

    Each control clock first lets the cores act in index order (retire the
    instruction in flight or fetch the next item), then runs the supervisor.
    """

    def __init__(
        self,
        image: ObjectImage,
        pool_size: int = DEFAULT_POOL_SIZE,
        timing: Optional[TimingConfig] = None,
        memory_size: int = DEFAULT_MEMORY_SIZE,
        max_clocks: int = DEFAULT_MAX_CLOCKS,
        check_invariants: bool = False,
        record_trace: bool = True,
        sumup_ceiling: int = 31,
    ):
        """
        Load a program and start its root on core 0.

        Args:
            image: Assembled program
            pool_size: Number of cores, 1..64
            timing: Clock costs; the shipped defaults when None
            memory_size: Bytes of memory
            max_clocks: Clock budget
            check_invariants: Verify supervisor invariants every clock
            record_trace: Keep the full event trace
            sumup_ceiling: Peak cores allowed during SUMUP when checking invariants
        """
        self.timing = timing or TimingConfig.default()
        self.memory = Memory(memory_size)
        self.entry = load(image, self.memory)
        self.pool_size = pool_size
        self.max_clocks = max_clocks
        self.check_invariants = check_invariants
        self.recorder = TraceRecorder(enabled=record_trace)
        self.supervisor = Supervisor.create_pool(
            pool_size, self.timing, self.entry, recorder=self.recorder, sumup_ceiling=sumup_ceiling,
        )
        self.clock = 0

    @property
    def finished(self) -> bool:
        return self.supervisor.finished

    @property
    def cores(self) -> List[CoreRecord]:
        return self.supervisor.cores

    def step(self) -> List[TraceEvent]:
        """
        Advance exactly one control clock.

        Returns:
            List[TraceEvent]: Events stamped with the new clock

        Raises:
            MachineFinishedError: If the program already ended
            ClockBudgetExceededError: If the clock budget is exhausted
            DeadlockError: If nothing can make progress any more
            SimulationFault: On core faults
        """
        if self.finished:
            raise MachineFinishedError(f"program finished at clock {self.recorder.last_clock}")
        self.clock += 1
        if self.clock > self.max_clocks:
            logger.error(f"Clock budget of {self.max_clocks} exhausted")
            raise ClockBudgetExceededError(f"clock budget of {self.max_clocks} clocks exceeded")

        start = len(self.recorder.events)
        clock = self.clock
        for core in self.cores:
            if core.state != CoreState.ENABLED or core.halted or core.awaiting_supervisor:
                continue
            if core.in_flight is not None:
                if core.retire_at == clock:
                    self._retire(core, clock)
            elif core.resume_at <= clock:
                self._issue(core, clock)

        self.supervisor.tick(clock)
        if self.check_invariants:
            self.supervisor.check_invariants(clock)
        if not self.finished and self._next_event_clock() is None:
            diagnostic = self.supervisor.describe()
            logger.error(f"Deadlock at clock {clock}: {diagnostic}")
            raise DeadlockError(f"deadlock at clock {clock}: {diagnostic}")
        return self.recorder.events[start:]

    def run(self) -> RunReport:
        """
        Run until the root has ended and every other core is back in the pool.

        Idle clocks between events are skipped; they change no state.

        Returns:
            RunReport: Totals, peak cores, root snapshot and trace
        """
        logger.debug(f"Running from 0x{self.entry:04x} on {self.pool_size} cores")
        while not self.finished:
            upcoming = self._next_event_clock()
            if upcoming is None:
                raise DeadlockError(f"deadlock at clock {self.clock}: {self.supervisor.describe()}")
            if upcoming > self.clock + 1:
                self.clock = min(upcoming, self.max_clocks + 1) - 1
            self.step()
        report = self.report()
        logger.info(f"Run finished: clocks={report.total_clocks} k={report.peak_cores}")
        return report

    def report(self) -> RunReport:
        """Snapshot of the run so far."""
        root = self.supervisor.root
        return RunReport(
            total_clocks=self.recorder.last_clock,
            peak_cores=max(self.supervisor.peak_cores, 1),
            pool_size=self.pool_size,
            busy_clocks={core.index: core.busy_clocks for core in self.cores if core.busy_clocks},
            registers=root.regs.as_dict(),
            condition_codes=root.cc.as_dict(),
            memory=self.memory.snapshot(),
            trace=list(self.recorder.events),
        )

    def _issue(self, core: CoreRecord, clock: int) -> None:
        try:
            item, _ = self.memory.fetch(core.pc)
        except InvalidInstructionError as e:
            logger.error(f"Core {core.index} fetched an invalid instruction: {e}")
            raise SimulationFault(str(e), core.index, core.pc)
        if isinstance(item, MetaInstruction):
            self.supervisor.enqueue(core.index, item, clock)
            return
        core.in_flight = item
        core.retire_at = clock + self.timing.cost_of(item.op) - 1
        if core.retire_at == clock:
            self._retire(core, clock)

    def _retire(self, core: CoreRecord, clock: int) -> None:
        core.in_flight = None
        event = step_core(core, self.memory, self.timing)
        core.busy_clocks += event.clocks
        core.resume_at = clock + 1
        if event.kind == CoreEventKind.EXECUTED:
            self.recorder.record(clock, TraceEventKind.EXECUTE, core.index, event.instruction.render())
            for request in event.requests:
                self.supervisor.deliver_request(request, clock)
        elif event.kind == CoreEventKind.HALTED:
            if core.parent == 0:
                self.supervisor.end_root(clock)
            else:
                core.halted = True
                self.recorder.record(clock, TraceEventKind.HALT, core.index, "child halt")
                self.supervisor.enqueue(core.index, IMPLICIT_QTERM, clock, implicit=True)
        elif event.kind == CoreEventKind.META_RAISED:
            # The item changed while in flight; hand it over like a fresh fetch.
            self.supervisor.enqueue(core.index, event.meta, clock)

    def _next_event_clock(self) -> Optional[int]:
        after = self.clock + 1
        candidates = []
        for core in self.cores:
            if core.state != CoreState.ENABLED or core.halted or core.awaiting_supervisor:
                continue
            candidates.append(core.retire_at if core.in_flight is not None else max(core.resume_at, after))
        supervisor = self.supervisor.next_activity(self.clock)
        if supervisor is not None:
            candidates.append(supervisor)
        return min(candidates) if candidates else None


def run(image: ObjectImage, pool_size: int = DEFAULT_POOL_SIZE, timing: Optional[TimingConfig] = None,
        **options) -> RunReport:
    """
    Load and run a program on a fresh machine.

    Args:
        image: Assembled program
        pool_size: Number of cores
        timing: Clock costs; the shipped defaults when None
        **options: Further ``Machine`` keyword arguments

    Returns:
        RunReport: The outcome of the run
    """
    return Machine(image, pool_size=pool_size, timing=timing, **options).run()
