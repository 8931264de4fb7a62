"""cores - The core model: registers, latches, state machine and execution."""

from .core import (
    LEGAL_TRANSITIONS,
    LINK_REGISTER,
    ConditionCodes,
    CoreEvent,
    CoreEventKind,
    CoreRecord,
    Latch,
    LatchSet,
    RegisterFile,
    SvRequest,
    SvRequestKind,
    access_register,
    clone_from,
    step_core,
)

__all__ = [
    "LEGAL_TRANSITIONS",
    "LINK_REGISTER",
    "ConditionCodes",
    "CoreEvent",
    "CoreEventKind",
    "CoreRecord",
    "Latch",
    "LatchSet",
    "RegisterFile",
    "SvRequest",
    "SvRequestKind",
    "access_register",
    "clone_from",
    "step_core",
]
