"""Exceptions raised by the EMPA simulator components."""

from typing import Optional


class AssemblyError(ValueError):
    """Raised when an assembly source cannot be translated."""

    def __init__(self, message: str, line_number: int, source_line: str = ""):
        self.line_number = line_number
        self.source_line = source_line
        super().__init__(f"line {line_number}: {message}")


class InvalidInstructionError(ValueError):
    """Raised when the bytes at an address do not decode to a known item."""

    def __init__(self, message: str, address: int):
        self.address = address
        super().__init__(f"{message} at address 0x{address:04x}")


class MemoryAccessError(ValueError):
    """Raised on memory accesses outside the configured address space."""

    def __init__(self, address: int, size: int, memory_size: int):
        self.address = address
        self.size = size
        super().__init__(
            f"access of {size} byte(s) at 0x{address:x} outside memory of {memory_size} bytes"
        )


class SimulationFault(RuntimeError):
    """Raised when a core cannot continue; carries the faulting core and pc."""

    def __init__(self, message: str, core_id: Optional[int] = None, pc: Optional[int] = None):
        self.core_id = core_id
        self.pc = pc
        location = ""
        if core_id is not None:
            location = f" (core {core_id}" + (f", pc 0x{pc:04x})" if pc is not None else ")")
        super().__init__(f"{message}{location}")


class UninitializedPseudoRegisterError(SimulationFault):
    """Raised when the pseudo-register is read before its latch was written."""


class DeadlockError(SimulationFault):
    """Raised when no core and no supervisor activity can make progress."""


class ClockBudgetExceededError(RuntimeError):
    """Raised when a run exceeds its configured clock budget."""


class MachineFinishedError(RuntimeError):
    """Raised when stepping a machine whose program already ended."""


class InvariantViolationError(RuntimeError):
    """Raised when a machine invariant does not hold."""


class MetricDomainError(ValueError):
    """Raised when a metric is evaluated outside its domain."""
