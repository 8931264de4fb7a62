"""The supervisor: core pool, metainstruction service and mass processing."""

import logging
from collections import deque
from typing import Deque, Dict, List, Optional

from ..cores import LINK_REGISTER, CoreRecord, SvRequest, clone_from
from ..errors import InvariantViolationError, SimulationFault, UninitializedPseudoRegisterError
from ..isa import FwdDirection, MassMode, MetaInstruction, MetaKind
from ..isa.instructions import META_LENGTHS, WORD_MASK
from ..models import CoreMode, CoreState, TraceEventKind, TransferRoute
from ..trace import DELIVER_FOR_PARENT, PICKUP_FOR_PARENT, TraceRecorder
from ..utils import bit, full_mask, indices, is_one_hot, lowest_index, popcount
from .mass_controller import MassController

logger = logging.getLogger(__name__)

MAX_POOL_SIZE = 64
ROOT_INDEX = 0
IMPLICIT_QTERM = MetaInstruction(kind=MetaKind.QTERM)

_CHILD_MODES = {MassMode.FOR: CoreMode.FOR_CHILD, MassMode.SUMUP: CoreMode.SUMUP_CHILD}
_PARENT_MODES = {MassMode.FOR: CoreMode.FOR_PARENT, MassMode.SUMUP: CoreMode.SUMUP_PARENT}

TO_SV = TransferRoute.CORE_TO_SV
TO_CORE = TransferRoute.SV_TO_CORE


class SvOperation:
    """A metainstruction waiting for, or being retried by, the supervisor."""

    def __init__(self, sequence: int, core: int, meta: MetaInstruction, raised_at: int, implicit: bool = False):
        self.sequence = sequence
        self.core = core
        self.meta = meta
        self.raised_at = raised_at
        self.implicit = implicit
        self.missing = meta.count  # QPrealloc cores still to reserve
        self.retries = 0

    def __repr__(self) -> str:
        return f"SvOperation(#{self.sequence}, core {self.core}, {self.meta.render()})"


class Supervisor:
    """
    Owns the pool and services metainstructions one operation per clock.

    Attributes:
        cores: Core table indexed by core number
        pool: Bitmask of cores in the Created state and not reserved
        queue: FIFO of raised operations
        blocked: Allocation/preallocation operations waiting for cores
        controllers: Active mass controllers by parent index
        ready: True while the pool is nonempty or some core is Enabled
    """

    def __init__(self, pool_size: int, timing, recorder: Optional[TraceRecorder] = None, sumup_ceiling: int = 31):
        """
        Create ``pool_size`` cores, all in the pool.

        Args:
            pool_size: Number of cores, 1..64
            timing: TimingConfig supplying operation costs
            recorder: Trace sink
            sumup_ceiling: Peak cores allowed while SUMUP runs (checked by ``check_invariants``)

        Raises:
            ValueError: If the pool size is out of range
        """
        if not 1 <= pool_size <= MAX_POOL_SIZE:
            logger.error(f"Invalid pool size {pool_size}")
            raise ValueError(f"pool size must be within 1..{MAX_POOL_SIZE}, got {pool_size}")
        self.timing = timing
        self.recorder = recorder or TraceRecorder()
        self.sumup_ceiling = sumup_ceiling
        self.cores: List[CoreRecord] = [CoreRecord(index) for index in range(pool_size)]
        self.all_cores = full_mask(pool_size)
        self.pool = self.all_cores
        self.queue: Deque[SvOperation] = deque()
        self.blocked: List[SvOperation] = []
        self.gates: Dict[int, SvOperation] = {}
        self.controllers: Dict[int, MassController] = {}
        self.busy_until = 0
        self.ready = True
        self.root_done = False
        self.finished = False
        self.peak_cores = 0
        self._sequence = 0
        self._operations: Dict[int, int] = {}

    @classmethod
    def create_pool(cls, pool_size: int, timing, entry: int, recorder: Optional[TraceRecorder] = None,
                    sumup_ceiling: int = 31) -> "Supervisor":
        """
        Create the pool and start the root program on core 0.

        Args:
            pool_size: Number of cores, 1..64
            timing: TimingConfig
            entry: Code address of the root program
            recorder: Trace sink
            sumup_ceiling: SUMUP peak-core ceiling

        Returns:
            Supervisor: State with the root core Enabled at ``entry``
        """
        supervisor = cls(pool_size, timing, recorder, sumup_ceiling)
        supervisor.start_root(entry)
        return supervisor

    # -- pool bookkeeping -------------------------------------------------

    @property
    def root(self) -> CoreRecord:
        return self.cores[ROOT_INDEX]

    @property
    def cores_in_use(self) -> int:
        """Cores currently out of the pool (allocated or reserved)."""
        return popcount(self.all_cores & ~self.pool)

    def _note_peak(self) -> None:
        self.peak_cores = max(self.peak_cores, self.cores_in_use)

    def _record(self, clock: int, kind: TraceEventKind, core: Optional[int] = None, detail: str = "",
                value: Optional[int] = None) -> None:
        self.recorder.record(clock, kind, core=core, detail=detail, value=value)

    def _transfer(self, clock: int, core: int, route: TransferRoute, detail: str, value: int) -> None:
        self.recorder.transfer(clock, core, route, detail, value)

    def start_root(self, entry: int, clock: int = 1) -> None:
        """Allocate and enable core 0 at ``entry``."""
        root = self.root
        self.pool &= ~root.identity
        root.transition(CoreState.ALLOCATED)
        root.pc = root.offset = entry
        root.transition(CoreState.ENABLED)
        root.resume_at = clock
        self._note_peak()
        self._record(0, TraceEventKind.ENABLE, ROOT_INDEX, f"root at 0x{entry:04x}")
        logger.debug(f"Root core enabled at 0x{entry:04x}, {popcount(self.pool)} cores in pool")

    def _take_core(self, parent: CoreRecord) -> Optional[int]:
        """Lowest-index core from the parent's reservation, else from the pool."""
        if parent.preallocated:
            index = lowest_index(parent.preallocated)
            parent.preallocated &= ~bit(index)
            return index
        if self.pool:
            index = lowest_index(self.pool)
            self.pool &= ~bit(index)
            return index
        return None

    def _return_to_pool(self, core: CoreRecord, clock: int) -> None:
        if core.preallocated:
            self.pool |= core.preallocated
            self._record(clock, TraceEventKind.RELEASE, core.index, f"reserved cores {list(indices(core.preallocated))}")
        if core.state in (CoreState.ENABLED, CoreState.BLOCKED):
            if core.state == CoreState.BLOCKED:
                core.transition(CoreState.ENABLED)
            core.transition(CoreState.ALLOCATED)
        core.reset()
        core.transition(CoreState.CREATED)
        self.pool |= core.identity
        self._record(clock, TraceEventKind.DEALLOCATE, core.index, "returned to pool")

    # -- queue --------------------------------------------------------------

    def enqueue(self, core_index: int, meta: MetaInstruction, clock: int, implicit: bool = False) -> SvOperation:
        """
        Queue a metainstruction raised by a core.

        Args:
            core_index: Raising core
            meta: The metainstruction
            clock: Clock it was raised in
            implicit: True for the QTerm implied by a child's halt

        Returns:
            SvOperation: The queued operation
        """
        self._sequence += 1
        operation = SvOperation(self._sequence, core_index, meta, clock, implicit)
        self.queue.append(operation)
        self.cores[core_index].awaiting_supervisor = True
        detail = meta.render() + (" (implicit, halt)" if implicit else "")
        self._record(clock, TraceEventKind.META, core_index, detail, value=operation.sequence)
        return operation

    def _next_operation(self) -> Optional[SvOperation]:
        for operation in self.blocked:
            if self._can_retry(operation):
                self.blocked.remove(operation)
                operation.retries += 1
                return operation
        return self.queue.popleft() if self.queue else None

    def _can_retry(self, operation: SvOperation) -> bool:
        core = self.cores[operation.core]
        if operation.meta.kind == MetaKind.QCREATE:
            return bool(core.preallocated or self.pool)
        return bool(self.pool)

    def tick(self, clock: int) -> None:
        """
        Run the supervisor's share of one control clock.

        Mass controllers act first; then at most one queued operation is
        applied, provided the previous one has finished.

        Args:
            clock: The current control clock
        """
        for controller in list(self.controllers.values()):
            self.mass_step(controller, clock)

        if clock > self.busy_until:
            operation = self._next_operation()
            if operation is not None:
                self._apply(operation, clock)

        self.ready = bool(self.pool) or any(core.state == CoreState.ENABLED for core in self.cores)

    def _apply(self, operation: SvOperation, clock: int) -> None:
        core = self.cores[operation.core]
        meta = operation.meta
        cost = self.timing.cost_of_meta(meta.kind)
        self.busy_until = clock + cost - 1
        self._operations[clock] = self._operations.get(clock, 0) + 1
        suffix = " retry" if operation.retries else ""
        self._record(clock, TraceEventKind.OPERATION, core.index, f"{meta.render()}{suffix}", value=operation.sequence)
        logger.debug(f"Clock {clock}: applying {operation}{suffix}")

        kind = meta.kind
        if kind == MetaKind.QCREATE:
            if self.allocate(core.index, meta.target, clock) is None:
                self._block(core, operation, clock, "no core available")
                self.blocked.append(operation)
            else:
                self._complete(core, operation, clock, cost)
        elif kind == MetaKind.QPREALLOC:
            operation.missing = self.preallocate(core.index, operation.missing, clock)
            if operation.missing:
                self._block(core, operation, clock, f"{operation.missing} core(s) short")
                self.blocked.append(operation)
            else:
                self._complete(core, operation, clock, cost)
        elif kind == MetaKind.QWAIT:
            if not self.wait(core.index, clock, operation):
                return
            self._complete(core, operation, clock, cost)
        elif kind == MetaKind.QTERM:
            self.terminate(core.index, clock, operation)
        elif kind == MetaKind.QMASS:
            self.mass_begin(core.index, meta, clock)
        elif kind == MetaKind.QFWD:
            self._forward(core, meta.direction, clock)
            self._complete(core, operation, clock, cost)

    def _block(self, core: CoreRecord, operation: SvOperation, clock: int, reason: str) -> None:
        if core.state == CoreState.ENABLED:
            core.transition(CoreState.BLOCKED)
            self._record(clock, TraceEventKind.BLOCK, core.index, f"{operation.meta.mnemonic}: {reason}")

    def _complete(self, core: CoreRecord, operation: SvOperation, clock: int, cost: int) -> None:
        """Finish a core's operation: unblock, step past the metainstruction, resume."""
        if core.state == CoreState.BLOCKED:
            core.transition(CoreState.ENABLED)
            self._record(clock, TraceEventKind.UNBLOCK, core.index, operation.meta.mnemonic)
        core.pc = (core.pc + operation.meta.length) & WORD_MASK
        core.awaiting_supervisor = False
        core.resume_at = clock + cost

    # -- operations ---------------------------------------------------------

    def allocate(self, parent_index: int, offset: int, clock: int) -> Optional[int]:
        """
        Rent a core for a parent and start it at ``offset`` with cloned glue.

        Args:
            parent_index: Requesting core
            offset: Code address the child runs
            clock: Current clock

        Returns:
            Optional[int]: The child's index, or None when no core is available
        """
        parent = self.cores[parent_index]
        child_index = self._take_core(parent)
        if child_index is None:
            logger.debug(f"Clock {clock}: no core for parent {parent_index}")
            return None
        child = self.cores[child_index]
        child.transition(CoreState.ALLOCATED)
        self._record(clock, TraceEventKind.ALLOCATE, child_index, f"child of core {parent_index}")
        parent.children |= child.identity
        child.parent = parent.identity
        self._clone(parent, child, offset, clock)
        child.transition(CoreState.ENABLED)
        child.resume_at = clock + self.timing.clone
        self._record(clock, TraceEventKind.ENABLE, child_index, f"at 0x{offset:04x}")
        self._note_peak()
        return child_index

    def _clone(self, parent: CoreRecord, child: CoreRecord, offset: int, clock: int) -> None:
        clone_from(parent, child, offset)
        self._record(clock, TraceEventKind.CLONE, child.index, f"glue of core {parent.index}")
        if parent.latches.for_child.valid:
            value = parent.latches.for_child.value
            self._transfer(clock, parent.index, TO_SV, "for_child", value)
            self._transfer(clock, child.index, TO_CORE, "from_parent", value)

    def terminate(self, child_index: int, clock: int, operation: Optional[SvOperation] = None) -> bool:
        """
        Terminate a core that raised QTerm (or halted as a child).

        Args:
            child_index: Terminating core
            clock: Current clock
            operation: The QTerm operation, kept while the core waits for its children

        Returns:
            bool: False when the core must first wait for its own children
        """
        child = self.cores[child_index]
        operation = operation or SvOperation(0, child_index, IMPLICIT_QTERM, clock)
        if child.children:
            self._block(child, operation, clock, "children still running")
            self.gates[child_index] = operation
            return False

        if child.parent == 0:
            self._finish_root(child, clock)
            return True

        parent = self.cores[lowest_index(child.parent)]
        if child.mode == CoreMode.FOR_CHILD:
            self._finish_for_iteration(self.controllers[parent.index], child, clock)
            return True
        if child.mode == CoreMode.SUMUP_CHILD:
            controller = self.controllers[parent.index]
            controller.active_children &= ~child.identity
            parent.children &= ~child.identity
            self._return_to_pool(child, clock)
            self._after_release(clock)
            return True

        link = child.regs[LINK_REGISTER]
        self._transfer(clock, child.index, TO_SV, "link", link)
        parent.latches.link.write(link)
        self._transfer(clock, parent.index, TO_CORE, f"link<-link core {child.index}", link)
        if child.latches.for_parent.valid:
            value = child.latches.for_parent.value
            parent.latches.from_child.write(value)
            self._transfer(clock, parent.index, TO_CORE, f"{DELIVER_FOR_PARENT} core {child.index}", value)
        else:
            parent.latches.from_child.write(link)
            self._transfer(clock, parent.index, TO_CORE, f"from_child<-link core {child.index}", link)

        parent.children &= ~child.identity
        self._return_to_pool(child, clock)
        self._open_gate(parent, clock)
        self._after_release(clock)
        return True

    def _open_gate(self, parent: CoreRecord, clock: int) -> None:
        """Resume a parent blocked in QWait/QTerm once its children are gone."""
        if parent.children or parent.index not in self.gates:
            return
        operation = self.gates.pop(parent.index)
        if operation.meta.kind == MetaKind.QWAIT:
            self._complete(parent, operation, clock, self.timing.qwait)
            return
        parent.transition(CoreState.ENABLED)
        self._record(clock, TraceEventKind.UNBLOCK, parent.index, "QTerm")
        self.terminate(parent.index, clock, operation)

    def _finish_root(self, root: CoreRecord, clock: int) -> None:
        root.halted = True
        root.awaiting_supervisor = False
        self.root_done = True
        if root.preallocated:
            self.pool |= root.preallocated
            self._record(clock, TraceEventKind.RELEASE, root.index, f"reserved cores {list(indices(root.preallocated))}")
            root.preallocated = 0
        self._record(clock, TraceEventKind.HALT, root.index, "root program ended")
        self._after_release(clock)

    def end_root(self, clock: int) -> None:
        """The root executed halt."""
        self._finish_root(self.root, clock)

    def _after_release(self, clock: int) -> None:
        if self.root_done and not self.finished and self.pool == self.all_cores & ~self.root.identity:
            self.finished = True
            self._record(clock, TraceEventKind.END, None, "pool full, program finished")
            logger.debug(f"Clock {clock}: program finished")

    def wait(self, parent_index: int, clock: int, operation: Optional[SvOperation] = None) -> bool:
        """
        Wait for all children of a core.

        Returns:
            bool: True when there is nothing to wait for; otherwise the core is
            Blocked and resumes when its last child terminates
        """
        parent = self.cores[parent_index]
        if not parent.children:
            return True
        operation = operation or SvOperation(0, parent_index, MetaInstruction(kind=MetaKind.QWAIT), clock)
        self._block(parent, operation, clock, "children still running")
        self.gates[parent_index] = operation
        return False

    def preallocate(self, parent_index: int, count: int, clock: int) -> int:
        """
        Reserve up to ``count`` lowest-index pool cores for a parent.

        Returns:
            int: Number of cores that could not be reserved yet
        """
        parent = self.cores[parent_index]
        reserved = []
        while count and self.pool:
            index = lowest_index(self.pool)
            self.pool &= ~bit(index)
            parent.preallocated |= bit(index)
            reserved.append(index)
            count -= 1
        if reserved:
            self._record(clock, TraceEventKind.PREALLOCATE, parent_index, f"cores {reserved}")
            self._note_peak()
        return count

    def _forward(self, core: CoreRecord, direction: FwdDirection, clock: int) -> None:
        latches = core.latches
        source, target = (
            (latches.from_child, latches.for_parent) if direction == FwdDirection.UP
            else (latches.from_parent, latches.for_child)
        )
        if not source.valid:
            name = "from_child" if direction == FwdDirection.UP else "from_parent"
            logger.error(f"Core {core.index} forwards uninitialized {name}")
            raise UninitializedPseudoRegisterError(f"uninitialized pseudo-register ({name})", core.index, core.pc)
        target.write(source.value)
        self._record(clock, TraceEventKind.FORWARD, core.index, f"{direction.value} {source.value:#x}", value=source.value)
        if direction == FwdDirection.UP and core.parent:
            self.deliver_request(SvRequest(core=core.index, value=source.value), clock)

    def deliver_request(self, request: SvRequest, clock: int) -> None:
        """
        Accept a child's pseudo-register write.

        SUMUP summands go to the parent's adder, a FOR child's write breaks
        the loop, any other value stays latched until the child terminates.
        """
        child = self.cores[request.core]
        self._transfer(clock, child.index, TO_SV, PICKUP_FOR_PARENT, request.value)
        if child.mode not in (CoreMode.FOR_CHILD, CoreMode.SUMUP_CHILD):
            return
        controller = self.controllers[lowest_index(child.parent)]
        if child.mode == CoreMode.SUMUP_CHILD:
            controller.pending.append(request.value)
        else:
            controller.break_requested = True
            self._record(clock, TraceEventKind.MASS_BREAK, controller.parent,
                         f"core {child.index} breaks after {controller.launched} iteration(s)", value=request.value)

    # -- mass processing ----------------------------------------------------

    def mass_begin(self, parent_index: int, meta: MetaInstruction, clock: int) -> MassController:
        """
        Start a FOR or SUMUP mass operation; the parent stalls at the QMass.

        Raises:
            SimulationFault: If the parent has no preallocated core
        """
        parent = self.cores[parent_index]
        if not parent.preallocated:
            logger.error(f"Core {parent_index} starts QMass without a preallocated core")
            raise SimulationFault("QMass requires a preallocated core", parent_index, parent.pc)

        cost = self.timing.qmass
        controller = MassController(
            mode=meta.mass_mode,
            parent=parent_index,
            remaining=parent.regs[meta.count_register],
            current_address=parent.regs[meta.address_register],
            stride=meta.stride,
            body=meta.target,
            ready_at=clock + cost,
        )
        self.controllers[parent_index] = controller
        parent.mode = _PARENT_MODES[meta.mass_mode]
        if meta.mass_mode == MassMode.FOR:
            parent.latches.from_child.write(controller.remaining)
        parent.transition(CoreState.BLOCKED)
        self._record(clock, TraceEventKind.MASS_BEGIN, parent_index,
                     f"{meta.mass_mode.value} count {controller.remaining} from 0x{controller.current_address:x} "
                     f"stride {controller.stride} body 0x{controller.body:x}")
        logger.debug(f"Clock {clock}: {controller}")
        if controller.remaining == 0:
            self._retire(controller, clock, clock + cost)
        return controller

    def mass_step(self, controller: MassController, clock: int) -> None:
        """
        One clock of a mass controller: accumulate a summand, then launch the
        next iteration or retire.
        """
        if controller.retired:
            return
        if controller.pending and clock >= controller.accumulate_ready_at:
            self.sumup_accumulate(controller, controller.pending.popleft(), clock)
            controller.accumulate_ready_at = clock + self.timing.mass_accumulate
            if controller.retired:
                return
        if clock < controller.launch_ready_at:
            return
        if not controller.launching:
            if controller.drained:
                self._retire(controller, clock)
            return
        if controller.mode == MassMode.FOR and controller.active_children:
            return

        parent = self.cores[controller.parent]
        if controller.child is not None:
            child_index = controller.child
        else:
            child_index = self._take_core(parent)
        if child_index is None:
            if not controller.stalled:
                controller.stalled = True
                self._record(clock, TraceEventKind.MASS_STALL, controller.parent, "waiting for a recycled core")
            return
        controller.stalled = False
        self._launch(controller, parent, self.cores[child_index], clock)

    def _launch(self, controller: MassController, parent: CoreRecord, child: CoreRecord, clock: int) -> None:
        address = controller.advance()
        parent.latches.for_child.write(address)
        self._transfer(clock, parent.index, TO_CORE, "for_child", address)
        if child.state == CoreState.CREATED:
            child.transition(CoreState.ALLOCATED)
            self._record(clock, TraceEventKind.ALLOCATE, child.index, f"child of core {parent.index}")
            child.parent = parent.identity
            parent.children |= child.identity
            self._clone(parent, child, controller.body, clock)
            child.mode = _CHILD_MODES[controller.mode]
            delay = self.timing.clone
            if controller.mode == MassMode.FOR:
                controller.child = child.index
        else:
            child.pc = controller.body
            child.latches.for_parent.clear()
            child.latches.from_parent.write(address)
            self._transfer(clock, child.index, TO_CORE, "from_parent", address)
            delay = self.timing.enable
        child.transition(CoreState.ENABLED)
        child.resume_at = clock + delay
        controller.active_children |= child.identity
        if controller.mode == MassMode.FOR:
            parent.latches.from_child.write(controller.remaining)
            self._transfer(clock, parent.index, TO_CORE, "from_child=remaining", controller.remaining)
        controller.launch_ready_at = clock + self.timing.mass_launch
        self._record(clock, TraceEventKind.MASS_LAUNCH, child.index,
                     f"iteration {controller.launched} address 0x{address:x}", value=address)
        self._note_peak()

    def _finish_for_iteration(self, controller: MassController, child: CoreRecord, clock: int) -> None:
        parent = self.cores[controller.parent]
        link = child.regs[LINK_REGISTER]
        self._transfer(clock, child.index, TO_SV, "link", link)
        parent.regs[LINK_REGISTER] = link
        parent.latches.link.write(link)
        self._transfer(clock, parent.index, TO_CORE, "%eax<-link", link)
        child.transition(CoreState.ALLOCATED)
        child.awaiting_supervisor = False
        child.halted = False
        controller.active_children &= ~child.identity
        self._record(clock, TraceEventKind.DISABLE, child.index, f"iteration {controller.launched} done")

    def sumup_accumulate(self, controller: MassController, value: int, clock: int) -> None:
        """
        Add one summand into the SUMUP adder.

        Raises:
            InvariantViolationError: If the controller is not in SUMUP mode
        """
        if controller.mode != MassMode.SUMUP:
            raise InvariantViolationError("accumulate on a FOR controller")
        controller.accumulator = (controller.accumulator + value) & WORD_MASK
        self._record(clock, TraceEventKind.MASS_ACCUMULATE, controller.parent,
                     f"+{value:#x} = {controller.accumulator:#x}", value=value)
        if controller.drained:
            self._retire(controller, clock)

    def _retire(self, controller: MassController, clock: int, resume_at: Optional[int] = None) -> None:
        parent = self.cores[controller.parent]
        if controller.mode == MassMode.SUMUP:
            parent.latches.from_child.write(controller.accumulator)
            self._transfer(clock, parent.index, TO_CORE, "from_child<-accumulator", controller.accumulator)
        if controller.child is not None:
            child = self.cores[controller.child]
            parent.children &= ~child.identity
            child.reset()
            child.transition(CoreState.CREATED)
            parent.preallocated |= child.identity
            self._record(clock, TraceEventKind.DEALLOCATE, child.index, f"back to reservation of core {parent.index}")
        controller.retired = True
        del self.controllers[controller.parent]
        parent.mode = CoreMode.NORMAL
        parent.transition(CoreState.ENABLED)
        parent.pc = (parent.pc + META_LENGTHS[MetaKind.QMASS]) & WORD_MASK
        parent.awaiting_supervisor = False
        parent.resume_at = resume_at if resume_at is not None else clock + self.timing.mass_retire
        self._record(clock, TraceEventKind.MASS_RETIRE, parent.index,
                     f"{controller.mode.value} after {controller.launched} iteration(s)")

    def next_activity(self, clock: int) -> Optional[int]:
        """
        Earliest clock after ``clock`` at which the supervisor has work.

        Returns:
            Optional[int]: The clock, or None if it only waits on cores
        """
        after = clock + 1
        candidates = []
        if self.queue or any(self._can_retry(operation) for operation in self.blocked):
            candidates.append(max(self.busy_until + 1, after))
        for controller in self.controllers.values():
            if controller.pending:
                candidates.append(max(controller.accumulate_ready_at, after))
            if controller.launching:
                parent = self.cores[controller.parent]
                if controller.mode == MassMode.FOR:
                    can_launch = not controller.active_children
                else:
                    can_launch = bool(parent.preallocated or self.pool)
                if can_launch:
                    candidates.append(max(controller.launch_ready_at, after))
            elif controller.drained:
                candidates.append(max(controller.launch_ready_at, after))
        return min(candidates) if candidates else None

    def describe(self) -> str:
        """One-line summary of cores, queue and blocked requests for diagnostics."""
        cores = ", ".join(
            f"{core.index}:{core.state.value}@0x{core.pc:x}"
            for core in self.cores if core.state != CoreState.CREATED
        )
        return (
            f"cores [{cores}] pool {popcount(self.pool)} queue {list(self.queue)} "
            f"blocked {self.blocked} waiting {sorted(self.gates)} controllers {list(self.controllers.values())}"
        )

    # -- invariants -----------------------------------------------------------

    def check_invariants(self, clock: int) -> None:
        """
        Verify the pool and parent/child bookkeeping.

        Raises:
            InvariantViolationError: Listing every violated property
        """
        problems = []
        seen = self.pool
        for core in self.cores:
            if not is_one_hot(core.identity):
                problems.append(f"core {core.index}: identity {core.identity:#x} not one-hot")
            if core.parent and not is_one_hot(core.parent):
                problems.append(f"core {core.index}: more than one parent")
            if core.identity & (core.parent | core.children | core.preallocated):
                problems.append(f"core {core.index}: identity inside its own masks")
            owned = core.preallocated
            if core.state != CoreState.CREATED:
                owned |= core.identity
            elif core.children:
                problems.append(f"core {core.index}: terminated with children {core.children:#x}")
            if seen & owned:
                problems.append(f"core {core.index}: masks overlap {seen & owned:#x}")
            seen |= owned
            for child_index in indices(core.children):
                if self.cores[child_index].parent != core.identity:
                    problems.append(f"core {core.index}: child {child_index} does not name it as parent")
            if core.parent:
                parent = self.cores[lowest_index(core.parent)]
                if not parent.children & core.identity:
                    problems.append(f"core {core.index}: parent {parent.index} does not list it")
        if seen != self.all_cores:
            problems.append(f"cores {self.all_cores & ~seen:#x} are nowhere")
        if self._operations.get(clock, 0) > 1:
            problems.append(f"{self._operations[clock]} supervisor operations in one clock")
        if any(c.mode == MassMode.SUMUP for c in self.controllers.values()) and self.cores_in_use > self.sumup_ceiling:
            problems.append(f"{self.cores_in_use} cores in use during SUMUP, ceiling {self.sumup_ceiling}")
        if problems:
            logger.error(f"Clock {clock}: invariant violations: {problems}")
            raise InvariantViolationError(f"clock {clock}: " + "; ".join(problems))
