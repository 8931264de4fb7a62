"""Flat little-endian byte memory shared by all cores."""

import logging
from typing import Dict, Tuple

from ..errors import MemoryAccessError
from ..isa import Item, ObjectImage, decode

logger = logging.getLogger(__name__)

DEFAULT_MEMORY_SIZE = 64 * 1024
# Longest encoded item; a word write may change any item starting this far before it.
_MAX_ITEM_LENGTH = 10


class Memory:
    """Byte-addressed memory with unaligned 32-bit word access and a decode cache."""

    def __init__(self, size: int = DEFAULT_MEMORY_SIZE):
        """
        Initialize zeroed memory.

        Args:
            size: Number of bytes
        """
        if size < 1:
            raise ValueError(f"memory size must be positive, got {size}")
        self.size = size
        self.data = bytearray(size)
        self._decoded: Dict[int, Tuple[Item, int]] = {}

    def _check(self, address: int, size: int) -> None:
        if address < 0 or address + size > self.size:
            raise MemoryAccessError(address, size, self.size)

    def read_word(self, address: int) -> int:
        """Read an unsigned 32-bit little-endian word."""
        self._check(address, 4)
        return int.from_bytes(self.data[address:address + 4], "little")

    def write_word(self, address: int, value: int) -> None:
        """Write a 32-bit little-endian word."""
        self._check(address, 4)
        self.data[address:address + 4] = (value & 0xFFFFFFFF).to_bytes(4, "little")
        if self._decoded:
            for start in range(address - _MAX_ITEM_LENGTH + 1, address + 4):
                self._decoded.pop(start, None)

    def fetch(self, address: int) -> Tuple[Item, int]:
        """
        Decode the item at an address, reusing earlier decodes.

        Raises:
            InvalidInstructionError: If the bytes do not decode
        """
        cached = self._decoded.get(address)
        if cached is None:
            cached = decode(self.data, address)
            self._decoded[address] = cached
        return cached

    def load(self, image: ObjectImage) -> int:
        """
        Copy an image into memory.

        Args:
            image: The assembled program

        Returns:
            int: The image entry address

        Raises:
            MemoryAccessError: If a region does not fit
        """
        for address, data in image.regions():
            try:
                self._check(address, len(data))
            except MemoryAccessError:
                logger.error(f"Image region at 0x{address:x} ({len(data)} bytes) does not fit in memory")
                raise
            self.data[address:address + len(data)] = data
        self._decoded.clear()
        logger.debug(f"Loaded {len(image.records)} records, entry 0x{image.entry:04x}")
        return image.entry

    def snapshot(self) -> bytes:
        """Immutable copy of the memory contents."""
        return bytes(self.data)
