"""machine - Memory, timing configuration and the clock loop."""

from .memory import DEFAULT_MEMORY_SIZE, Memory
from .timing import TimingConfig
from .machine import DEFAULT_MAX_CLOCKS, DEFAULT_POOL_SIZE, Machine, load, run

__all__ = [
    "DEFAULT_MEMORY_SIZE",
    "DEFAULT_MAX_CLOCKS",
    "DEFAULT_POOL_SIZE",
    "Machine",
    "Memory",
    "TimingConfig",
    "load",
    "run",
]
