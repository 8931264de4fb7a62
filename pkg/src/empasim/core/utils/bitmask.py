"""Helpers for the one-hot core bitmasks kept by the supervisor."""

from typing import Iterator, Optional


def bit(index: int) -> int:
    """Return the one-hot mask of a core index."""
    return 1 << index


def popcount(mask: int) -> int:
    """Number of cores in a mask."""
    return bin(mask).count("1")


def is_one_hot(mask: int) -> bool:
    """True if exactly one bit is set."""
    return mask != 0 and mask & (mask - 1) == 0


def lowest_index(mask: int) -> Optional[int]:
    """Index of the lowest set bit, or None for an empty mask."""
    if mask == 0:
        return None
    return (mask & -mask).bit_length() - 1


def indices(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def full_mask(width: int) -> int:
    """Mask with the low ``width`` bits set."""
    return (1 << width) - 1
