"""core - Implementation of the EMPA simulator core functionality."""

from .simulator import Simulator, is_object_text
from .errors import (
    AssemblyError,
    ClockBudgetExceededError,
    DeadlockError,
    InvalidInstructionError,
    InvariantViolationError,
    MachineFinishedError,
    MemoryAccessError,
    MetricDomainError,
    SimulationFault,
    UninitializedPseudoRegisterError,
)
from .models import (
    CoreMode,
    CoreState,
    ModeResult,
    RunMode,
    RunReport,
    TraceEvent,
    TraceEventKind,
    TransferRoute,
)
from .isa import ObjectImage, assemble, disassemble, read_object, write_object
from .machine import Machine, TimingConfig
from .metrics import alpha_eff, effective_cores, speedup, sweep
from .report_writers import ReportWriter, create_report_writer
from .settings import ReportFormat, ReportSettings, ServiceSettings, SimulatorSettings
from .trace import TraceRecorder, write_trace

__version__ = "1.0.0"
__all__ = [
    "Simulator",
    "is_object_text",
    "AssemblyError",
    "ClockBudgetExceededError",
    "DeadlockError",
    "InvalidInstructionError",
    "InvariantViolationError",
    "MachineFinishedError",
    "MemoryAccessError",
    "MetricDomainError",
    "SimulationFault",
    "UninitializedPseudoRegisterError",
    "CoreMode",
    "CoreState",
    "ModeResult",
    "RunMode",
    "RunReport",
    "TraceEvent",
    "TraceEventKind",
    "TransferRoute",
    "ObjectImage",
    "assemble",
    "disassemble",
    "read_object",
    "write_object",
    "Machine",
    "TimingConfig",
    "alpha_eff",
    "effective_cores",
    "speedup",
    "sweep",
    "ReportWriter",
    "create_report_writer",
    "ReportFormat",
    "ReportSettings",
    "ServiceSettings",
    "SimulatorSettings",
    "TraceRecorder",
    "write_trace",
]
