"""Pydantic models for the empasim FastAPI web service."""

from typing import Dict, List, Optional

from pydantic import BaseModel, Field, model_validator

from empasim.core.models import ModeResult, RunMode


class AssembleRequest(BaseModel):
    """Request model for assembling a program."""

    source: str = Field(..., description="Assembly source text")


class AssembleResponse(BaseModel):
    """Response model for an assembled program."""

    object_text: str = Field(..., description="Textual object format")
    entry: int = Field(..., description="Address of the first instruction")
    symbols: Dict[str, int] = Field(default_factory=dict, description="Labels and constants")
    disassembly: str = Field(..., description="The image rendered back to mnemonics")


class RunRequest(BaseModel):
    """
    Request model for running a program.

    Either ``source`` (assembly or object text) or ``mode`` (a shipped sum-up
    program, fed with ``values`` or the vector 1..``veclen``) must be given.
    """

    source: Optional[str] = None
    mode: Optional[RunMode] = None
    veclen: Optional[int] = Field(default=None, ge=0)
    values: Optional[List[int]] = None
    pool_size: Optional[int] = Field(default=None, ge=1, le=64)
    include_trace: bool = False

    @model_validator(mode="after")
    def check_program(self) -> "RunRequest":
        if (self.source is None) == (self.mode is None):
            raise ValueError("exactly one of source or mode is required")
        if self.mode is not None and self.values is None and self.veclen is None:
            raise ValueError("mode runs need values or veclen")
        return self


class RunResponse(BaseModel):
    """Response model for a finished run."""

    total_clocks: int
    peak_cores: int
    result: int = Field(..., description="The root's %eax")
    registers: Dict[str, int]
    condition_codes: Dict[str, bool]
    trace: List[str] = Field(default_factory=list, description="Trace lines when requested")


class BenchmarkTableResponse(BaseModel):
    """Response model for the efficiency table."""

    rows: List[ModeResult]
    deltas: List[str] = Field(default_factory=list, description="Differences from the reference table")


class SweepRequest(BaseModel):
    """Request model for a benchmark sweep."""

    lengths: List[int] = Field(..., min_length=1)
    modes: List[RunMode] = Field(default_factory=lambda: list(RunMode), min_length=1)

    @model_validator(mode="after")
    def check_lengths(self) -> "SweepRequest":
        if min(self.lengths) < 1:
            raise ValueError("vector lengths must be at least 1")
        return self


class SweepResponse(BaseModel):
    """Response model for a benchmark sweep."""

    rows: List[ModeResult]
