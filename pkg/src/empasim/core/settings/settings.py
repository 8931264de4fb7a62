"""Settings for the EMPA simulator."""

from enum import Enum
from typing import Optional

from pydantic import Field, model_validator
from pydantic_settings import BaseSettings


class ReportFormat(str, Enum):
    """Enum for benchmark report formats."""
    CSV = "csv"
    MARKDOWN = "markdown"
    PLAIN = "plain"


class SimulatorSettings(BaseSettings):
    """Settings for the simulated machine."""

    pool_size: int = Field(default=32, ge=1, le=64)
    memory_size: int = Field(default=65536, ge=1)
    max_clocks: int = Field(default=10_000_000, ge=1)
    # None selects the timing file shipped with the package
    timing_path: Optional[str] = None
    check_invariants: bool = False
    recycle_latency: int = Field(default=30, ge=0)
    sumup_child_limit: int = Field(default=30, ge=1)

    model_config = {
        "env_prefix": "empasim_"
    }

    @model_validator(mode="after")
    def check_child_limit(self) -> "SimulatorSettings":
        """Keep the SUMUP child reservation within the recycling latency."""
        if self.sumup_child_limit > self.recycle_latency:
            raise ValueError(
                f"sumup_child_limit ({self.sumup_child_limit}) must not exceed "
                f"recycle_latency ({self.recycle_latency})"
            )
        return self


class ReportSettings(BaseSettings):
    """Settings for benchmark reports."""

    report_format: ReportFormat = ReportFormat.CSV

    model_config = {
        "env_prefix": "empasim_report_"
    }


class ServiceSettings(BaseSettings):
    """Settings for the FastAPI web service."""

    base_router_path: str = "/api/v1"
    max_sweep_length: int = 2000

    model_config = {
        "env_prefix": "empasim_service_"
    }
