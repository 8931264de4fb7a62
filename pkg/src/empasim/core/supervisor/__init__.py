"""supervisor - Core pool management, metainstruction service and mass processing."""

from .mass_controller import MassController
from .supervisor import IMPLICIT_QTERM, MAX_POOL_SIZE, SvOperation, Supervisor

__all__ = [
    "IMPLICIT_QTERM",
    "MAX_POOL_SIZE",
    "MassController",
    "SvOperation",
    "Supervisor",
]
