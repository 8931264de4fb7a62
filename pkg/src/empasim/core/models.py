"""Pydantic models shared across the EMPA simulator."""

from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, Field


class CoreState(str, Enum):
    """Core-level states; ``CREATED`` means the core sits in the pool."""
    CREATED = "Created"
    ALLOCATED = "Allocated"
    ENABLED = "Enabled"
    BLOCKED = "Blocked"


class CoreMode(str, Enum):
    """Operating mode of a core with respect to mass processing."""
    NORMAL = "NORMAL"
    FOR_CHILD = "FOR_CHILD"
    SUMUP_CHILD = "SUMUP_CHILD"
    FOR_PARENT = "FOR_PARENT"
    SUMUP_PARENT = "SUMUP_PARENT"


class RunMode(str, Enum):
    """Operating modes compared by the benchmarks."""
    NO = "NO"
    FOR = "FOR"
    SUMUP = "SUMUP"

    @property
    def rank(self) -> int:
        """Position used to order report rows."""
        return list(RunMode).index(self)


class TraceEventKind(str, Enum):
    """Kinds of events recorded in a run trace."""
    EXECUTE = "EXECUTE"
    HALT = "HALT"
    META = "META"
    OPERATION = "OPERATION"
    ALLOCATE = "ALLOCATE"
    CLONE = "CLONE"
    ENABLE = "ENABLE"
    DISABLE = "DISABLE"
    DEALLOCATE = "DEALLOCATE"
    BLOCK = "BLOCK"
    UNBLOCK = "UNBLOCK"
    PREALLOCATE = "PREALLOCATE"
    RELEASE = "RELEASE"
    TRANSFER = "TRANSFER"
    FORWARD = "FORWARD"
    MASS_BEGIN = "MASS_BEGIN"
    MASS_LAUNCH = "MASS_LAUNCH"
    MASS_STALL = "MASS_STALL"
    MASS_ACCUMULATE = "MASS_ACCUMULATE"
    MASS_BREAK = "MASS_BREAK"
    MASS_RETIRE = "MASS_RETIRE"
    END = "END"


class TransferRoute(str, Enum):
    """Direction of an inter-core data movement; the supervisor is the hub."""
    CORE_TO_SV = "core>sv"
    SV_TO_CORE = "sv>core"


class TraceEvent(BaseModel):
    """One trace line; ``core`` is None for supervisor-only events."""

    clock: int = Field(..., ge=0, description="Control clock stamp")
    core: Optional[int] = Field(default=None, description="Core index the event concerns")
    kind: TraceEventKind = Field(..., description="Event kind")
    detail: str = Field(default="", description="Free-form detail")
    route: Optional[TransferRoute] = Field(default=None, description="Set for data movements")
    value: Optional[int] = Field(default=None, description="Transferred value for data movements")

    def to_line(self) -> str:
        """Render as ``CLOCK<TAB>CORE<TAB>EVENT<TAB>DETAIL``."""
        core = "SV" if self.core is None else str(self.core)
        return f"{self.clock}\t{core}\t{self.kind.value}\t{self.detail}"


class RunReport(BaseModel):
    """Outcome of one simulation run."""

    total_clocks: int = Field(..., ge=0, description="Clock of the last event")
    peak_cores: int = Field(..., ge=1, description="Peak cores simultaneously out of the pool (k)")
    pool_size: int = Field(..., ge=1)
    busy_clocks: Dict[int, int] = Field(default_factory=dict, description="Per-core clocks spent executing")
    registers: Dict[str, int] = Field(default_factory=dict, description="Root register file at the end")
    condition_codes: Dict[str, bool] = Field(default_factory=dict, description="Root condition codes at the end")
    memory: bytes = Field(default=b"", repr=False, exclude=True, description="Final memory contents")
    trace: List[TraceEvent] = Field(default_factory=list, repr=False)

    @property
    def result(self) -> int:
        """The root's %eax, where the sample programs leave their sum."""
        return self.registers.get("%eax", 0)


class ModeResult(BaseModel):
    """One row of a benchmark table."""

    length: int = Field(..., ge=0, description="Vector length")
    mode: RunMode
    clocks: int = Field(..., ge=1)
    k: int = Field(..., ge=1, description="Peak cores")
    speedup: float = Field(..., ge=0)
    s_over_k: float = Field(..., ge=0)
    alpha_eff: Optional[float] = Field(default=None, description="None for the single-core baseline")
