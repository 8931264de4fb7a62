"""A single EMPA core: architectural state, latches, state machine and execution."""

import logging
from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from ..errors import (
    InvalidInstructionError,
    InvariantViolationError,
    MemoryAccessError,
    SimulationFault,
    UninitializedPseudoRegisterError,
)
from ..isa import Instruction, MetaInstruction, OpClass, PSEUDO_REGISTER, REGISTER_NAMES
from ..isa.instructions import WORD_MASK
from ..models import CoreMode, CoreState

logger = logging.getLogger(__name__)

ARCHITECTURAL_REGISTERS = 8
LINK_REGISTER = 0  # %eax
STACK_POINTER = 4  # %esp

LEGAL_TRANSITIONS = frozenset({
    (CoreState.CREATED, CoreState.ALLOCATED),   # Allocate
    (CoreState.ALLOCATED, CoreState.CREATED),   # Deallocate
    (CoreState.ALLOCATED, CoreState.ENABLED),   # Enable
    (CoreState.ENABLED, CoreState.ALLOCATED),   # Disable
    (CoreState.ENABLED, CoreState.BLOCKED),     # supervisor wait
    (CoreState.BLOCKED, CoreState.ENABLED),     # condition satisfied
})
PARENT_MODES = frozenset({CoreMode.FOR_PARENT, CoreMode.SUMUP_PARENT})

_ADD, _SUB, _AND, _XOR = range(4)


class RegisterFile:
    """Eight 32-bit wrap-around registers."""

    def __init__(self, values: Optional[List[int]] = None):
        self.values = [v & WORD_MASK for v in values] if values else [0] * ARCHITECTURAL_REGISTERS

    def __getitem__(self, register_id: int) -> int:
        return self.values[register_id]

    def __setitem__(self, register_id: int, value: int) -> None:
        self.values[register_id] = value & WORD_MASK

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RegisterFile) and self.values == other.values

    def copy(self) -> "RegisterFile":
        return RegisterFile(self.values)

    def as_dict(self) -> Dict[str, int]:
        return dict(zip(REGISTER_NAMES, self.values))


class ConditionCodes:
    """Zero, sign and overflow flags."""

    def __init__(self, zf: bool = True, sf: bool = False, of: bool = False):
        self.zf = zf
        self.sf = sf
        self.of = of

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ConditionCodes) and self.as_dict() == other.as_dict()

    def copy(self) -> "ConditionCodes":
        return ConditionCodes(self.zf, self.sf, self.of)

    def as_dict(self) -> Dict[str, bool]:
        return {"ZF": self.zf, "SF": self.sf, "OF": self.of}

    def holds(self, condition: int) -> bool:
        """Evaluate a Y86 condition code (0 = always)."""
        less = self.sf != self.of
        return (
            True,
            less or self.zf,
            less,
            self.zf,
            not self.zf,
            not less,
            not less and not self.zf,
        )[condition]


class Latch:
    """A 32-bit latch register with a valid flag."""

    def __init__(self):
        self.value = 0
        self.valid = False

    def write(self, value: int) -> None:
        self.value = value & WORD_MASK
        self.valid = True

    def clear(self) -> None:
        self.value = 0
        self.valid = False

    def __repr__(self) -> str:
        return f"Latch({self.value:#x})" if self.valid else "Latch(-)"


class LatchSet:
    """The parent/child communication latches of one core."""

    NAMES = ("for_child", "from_child", "for_parent", "from_parent", "link")

    def __init__(self):
        self.for_child = Latch()
        self.from_child = Latch()
        self.for_parent = Latch()
        self.from_parent = Latch()
        self.link = Latch()

    def reset(self) -> None:
        for name in self.NAMES:
            getattr(self, name).clear()

    def as_dict(self) -> Dict[str, Optional[int]]:
        return {
            name: (getattr(self, name).value if getattr(self, name).valid else None)
            for name in self.NAMES
        }


class SvRequestKind(str, Enum):
    """Transfers a core asks the supervisor to perform."""
    TRANSFER_TO_PARENT = "TRANSFER_TO_PARENT"


class SvRequest(BaseModel):
    """A supervisor transfer triggered by a pseudo-register write."""

    kind: SvRequestKind = SvRequestKind.TRANSFER_TO_PARENT
    core: int = Field(..., ge=0, description="Index of the requesting core")
    value: int = Field(..., ge=0, le=WORD_MASK)


class CoreEventKind(str, Enum):
    """Outcomes of one core step."""
    EXECUTED = "EXECUTED"
    META_RAISED = "META_RAISED"
    HALTED = "HALTED"
    BLOCKED_NO_PROGRESS = "BLOCKED_NO_PROGRESS"


class CoreEvent(BaseModel):
    """Result of ``step_core``."""

    kind: CoreEventKind
    instruction: Optional[Instruction] = None
    meta: Optional[MetaInstruction] = None
    clocks: int = 0
    requests: List[SvRequest] = Field(default_factory=list)


class CoreRecord:
    """
    One core of the pool.

    Holds the supervisor-visible masks (identity, parent, children,
    preallocated), the core-level state, the architectural state and the
    latches, plus the clock-loop bookkeeping used by the machine.
    """

    def __init__(self, index: int):
        """
        Initialize a core in the Created state.

        Args:
            index: Position of the core in the pool
        """
        self.index = index
        self.identity = 1 << index
        self.parent = 0
        self.children = 0
        self.preallocated = 0
        self.offset = 0
        self.state = CoreState.CREATED
        self.pc = 0
        self.regs = RegisterFile()
        self.cc = ConditionCodes()
        self.latches = LatchSet()
        self.mode = CoreMode.NORMAL

        # Clock-loop bookkeeping.
        self.resume_at = 0
        self.in_flight: Optional[Instruction] = None
        self.retire_at = 0
        self.awaiting_supervisor = False
        self.halted = False
        self.busy_clocks = 0

    def __repr__(self) -> str:
        return f"CoreRecord({self.index}, {self.state.value}, pc=0x{self.pc:x}, {self.mode.value})"

    @property
    def acts_as_child(self) -> bool:
        """Pseudo-register role: child unless parentless or running as a mass parent."""
        return self.parent != 0 and self.mode not in PARENT_MODES

    def transition(self, new_state: CoreState) -> None:
        """
        Move along one edge of the core-level state machine.

        Raises:
            InvariantViolationError: If the edge is not a legal transition
        """
        if (self.state, new_state) not in LEGAL_TRANSITIONS:
            logger.error(f"Illegal transition of core {self.index}: {self.state.value} -> {new_state.value}")
            raise InvariantViolationError(
                f"illegal transition {self.state.value} -> {new_state.value} on core {self.index}"
            )
        logger.debug(f"Core {self.index}: {self.state.value} -> {new_state.value}")
        self.state = new_state

    def reset(self) -> None:
        """Clear masks, latches, mode and bookkeeping before the core returns to the pool."""
        self.parent = 0
        self.children = 0
        self.preallocated = 0
        self.offset = 0
        self.pc = 0
        self.regs = RegisterFile()
        self.cc = ConditionCodes()
        self.latches.reset()
        self.mode = CoreMode.NORMAL
        self.in_flight = None
        self.retire_at = 0
        self.awaiting_supervisor = False
        self.halted = False


def clone_from(parent: CoreRecord, child: CoreRecord, offset: int) -> None:
    """
    Clone the parent's glue into a freshly allocated child.

    Args:
        parent: Core whose registers and flags are copied
        child: Allocated core receiving the copy
        offset: Code address the child starts at
    """
    if child.state != CoreState.ALLOCATED:
        raise InvariantViolationError(f"clone into core {child.index} in state {child.state.value}")
    child.regs = parent.regs.copy()
    child.cc = parent.cc.copy()
    child.pc = offset
    child.offset = offset
    if parent.latches.for_child.valid:
        child.latches.from_parent.write(parent.latches.for_child.value)


def access_register(core: CoreRecord, register_id: int, write: bool = False, value: int = 0):
    """
    Read or write a register, routing the pseudo-register through the latches.

    Args:
        core: The accessing core
        register_id: 0..7 for the register file, 8 for the pseudo-register
        write: True to write ``value``
        value: Value to write

    Returns:
        int for reads; for writes an SvRequest when the supervisor must
        transfer the value, otherwise None

    Raises:
        UninitializedPseudoRegisterError: Reading a latch never written
        SimulationFault: Invalid register id
    """
    if 0 <= register_id < ARCHITECTURAL_REGISTERS:
        if write:
            core.regs[register_id] = value
            return None
        return core.regs[register_id]

    if register_id != PSEUDO_REGISTER:
        logger.error(f"Core {core.index} accessed register id {register_id} at pc 0x{core.pc:x}")
        raise SimulationFault(f"invalid register id {register_id}", core.index, core.pc)

    latches = core.latches
    if core.acts_as_child:
        if write:
            latches.for_parent.write(value)
            return SvRequest(core=core.index, value=value & WORD_MASK)
        latch, name = latches.from_parent, "from_parent"
    else:
        if write:
            latches.for_child.write(value)
            return None
        latch, name = latches.from_child, "from_child"

    if not latch.valid:
        logger.error(f"Core {core.index} read uninitialized pseudo-register ({name}) at pc 0x{core.pc:x}")
        raise UninitializedPseudoRegisterError(f"uninitialized pseudo-register ({name})", core.index, core.pc)
    return latch.value


def _alu(fn: int, a: int, b: int) -> tuple:
    """Compute ``b OP a`` and the resulting condition codes."""
    if fn == _ADD:
        result = (b + a) & WORD_MASK
        overflow = (a >> 31) == (b >> 31) and (result >> 31) != (a >> 31)
    elif fn == _SUB:
        result = (b - a) & WORD_MASK
        overflow = (a >> 31) != (b >> 31) and (result >> 31) != (b >> 31)
    elif fn == _AND:
        result, overflow = a & b, False
    else:
        result, overflow = a ^ b, False
    return result, ConditionCodes(zf=result == 0, sf=bool(result >> 31), of=overflow)


def step_core(core: CoreRecord, memory, timing) -> CoreEvent:
    """
    Fetch the item at the core's pc and execute it.

    Executable instructions are applied completely; a metainstruction leaves
    the core untouched and is reported for the supervisor, which also
    advances the pc.

    Args:
        core: An Enabled core
        memory: The shared Memory
        timing: TimingConfig supplying the clock cost

    Returns:
        CoreEvent: Executed, MetaRaised, Halted or BlockedNoProgress

    Raises:
        SimulationFault: Invalid instruction, memory access outside the
            address space or uninitialized pseudo-register read
    """
    if core.state != CoreState.ENABLED or core.halted:
        return CoreEvent(kind=CoreEventKind.BLOCKED_NO_PROGRESS)

    pc = core.pc
    try:
        item, length = memory.fetch(pc)
    except InvalidInstructionError as e:
        logger.error(f"Core {core.index} fetched an invalid instruction: {e}")
        raise SimulationFault(str(e), core.index, pc)

    if isinstance(item, MetaInstruction):
        return CoreEvent(kind=CoreEventKind.META_RAISED, meta=item)
    if item.op == OpClass.HALT:
        return CoreEvent(kind=CoreEventKind.HALTED, instruction=item, clocks=timing.cost_of(item.op))

    requests: List[SvRequest] = []
    try:
        core.pc = _execute(core, memory, item, pc + length, requests) & WORD_MASK
    except MemoryAccessError as e:
        logger.error(f"Core {core.index} memory fault at pc 0x{pc:x}: {e}")
        raise SimulationFault(str(e), core.index, pc)
    return CoreEvent(
        kind=CoreEventKind.EXECUTED,
        instruction=item,
        clocks=timing.cost_of(item.op),
        requests=requests,
    )


def _execute(core: CoreRecord, memory, item: Instruction, next_pc: int, requests: List[SvRequest]) -> int:
    """Apply one executable instruction; returns the next pc."""

    def read(register_id: int) -> int:
        return access_register(core, register_id)

    def write(register_id: int, value: int) -> None:
        request = access_register(core, register_id, write=True, value=value)
        if request is not None:
            requests.append(request)

    op = item.op
    regs = core.regs
    if op == OpClass.NOP:
        pass
    elif op == OpClass.RRMOVL:
        if core.cc.holds(item.fn):
            write(item.rb, read(item.ra))
    elif op == OpClass.IRMOVL:
        write(item.rb, item.value)
    elif op == OpClass.RMMOVL:
        memory.write_word((read(item.rb) + item.value) & WORD_MASK, read(item.ra))
    elif op == OpClass.MRMOVL:
        write(item.ra, memory.read_word((read(item.rb) + item.value) & WORD_MASK))
    elif op == OpClass.OPL:
        if item.rb == PSEUDO_REGISTER and core.mode == CoreMode.SUMUP_CHILD:
            # The parent's adder does the arithmetic; the child only ships its summand.
            if item.fn != _ADD:
                logger.error(f"Core {core.index}: {item.mnemonic} to the pseudo-register in SUMUP mode")
                raise SimulationFault(f"{item.mnemonic} cannot target the pseudo-register in SUMUP mode", core.index, core.pc)
            write(PSEUDO_REGISTER, read(item.ra))
        else:
            result, core.cc = _alu(item.fn, read(item.ra), read(item.rb))
            write(item.rb, result)
    elif op == OpClass.IADDL:
        result, core.cc = _alu(_ADD, item.value, read(item.rb))
        write(item.rb, result)
    elif op == OpClass.JXX:
        if core.cc.holds(item.fn):
            return item.value
    elif op == OpClass.CALL:
        stack = (regs[STACK_POINTER] - 4) & WORD_MASK
        memory.write_word(stack, next_pc)
        regs[STACK_POINTER] = stack
        return item.value
    elif op == OpClass.RET:
        target = memory.read_word(regs[STACK_POINTER])
        regs[STACK_POINTER] = regs[STACK_POINTER] + 4
        return target
    elif op == OpClass.PUSHL:
        value = read(item.ra)
        stack = (regs[STACK_POINTER] - 4) & WORD_MASK
        memory.write_word(stack, value)
        regs[STACK_POINTER] = stack
    elif op == OpClass.POPL:
        value = memory.read_word(regs[STACK_POINTER])
        regs[STACK_POINTER] = regs[STACK_POINTER] + 4
        write(item.ra, value)
    return next_pc
