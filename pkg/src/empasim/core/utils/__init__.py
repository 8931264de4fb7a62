"""utils - Small helpers shared by the core packages."""

from .bitmask import bit, full_mask, indices, is_one_hot, lowest_index, popcount

__all__ = [
    "bit",
    "full_mask",
    "indices",
    "is_one_hot",
    "lowest_index",
    "popcount",
]
