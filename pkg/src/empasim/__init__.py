"""empasim - Cycle-level simulator of an explicitly many-processor (EMPA) machine."""

__version__ = "1.0.0"
