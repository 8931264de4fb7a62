from .settings import (
    ReportFormat,
    ReportSettings,
    ServiceSettings,
    SimulatorSettings,
)

__version__ = "1.0.0"
__all__ = [
    "ReportFormat",
    "ReportSettings",
    "ServiceSettings",
    "SimulatorSettings",
]
