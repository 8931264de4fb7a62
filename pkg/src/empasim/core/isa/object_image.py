"""Assembled object images and their textual object format."""

import logging
import re
from typing import Dict, List, Tuple

from pydantic import BaseModel, Field, field_validator

from ..errors import AssemblyError
from .instructions import decode

logger = logging.getLogger(__name__)

_RECORD_PATTERN = re.compile(r"^0x([0-9a-fA-F]+):\s+([0-9a-fA-F]+)\s+\|\s?(.*)$")
_ENTRY_PATTERN = re.compile(r"^#\s*entry\s+(\S+)$")
_SYMBOL_PATTERN = re.compile(r"^#\s*symbol\s+(\S+)\s+(\S+)$")
_LONG_DIRECTIVE = re.compile(r"(^|[\s:])\.long\b", re.IGNORECASE)


class ObjectRecord(BaseModel):
    """Bytes emitted for one source line."""

    address: int = Field(..., ge=0, description="Address of the first byte")
    data: bytes = Field(..., min_length=1, description="Emitted bytes")
    source: str = Field(default="", description="Source line that produced the bytes")
    line_number: int = Field(default=0, ge=0, description="1-based source line number, 0 if unknown")
    is_data: bool = Field(default=False, description="True for .long data, False for code")

    @property
    def end(self) -> int:
        """Address one past the last byte."""
        return self.address + len(self.data)


class ObjectImage(BaseModel):
    """An assembled program: byte regions, entry point, symbols and listing."""

    records: List[ObjectRecord] = Field(default_factory=list)
    entry: int = Field(default=0, ge=0)
    symbols: Dict[str, int] = Field(default_factory=dict)

    @field_validator("records")
    @classmethod
    def check_non_overlapping(cls, records: List[ObjectRecord]) -> List[ObjectRecord]:
        """Ensure byte regions do not overlap."""
        ordered = sorted(records, key=lambda record: record.address)
        for previous, current in zip(ordered, ordered[1:]):
            if current.address < previous.end:
                raise ValueError(
                    f"regions at 0x{previous.address:x} and 0x{current.address:x} overlap"
                )
        return records

    @property
    def image(self) -> Dict[int, int]:
        """Byte image as an address to byte map."""
        return {
            record.address + offset: byte
            for record in self.records
            for offset, byte in enumerate(record.data)
        }

    @property
    def listing(self) -> Dict[int, str]:
        """Source listing as an address to source line map."""
        return {record.address: record.source for record in self.records}

    @property
    def extent(self) -> int:
        """Address one past the highest emitted byte."""
        return max((record.end for record in self.records), default=0)

    def regions(self) -> List[Tuple[int, bytes]]:
        """Return (address, bytes) regions in address order."""
        return [(record.address, record.data) for record in sorted(self.records, key=lambda r: r.address)]


def write_object(image: ObjectImage) -> str:
    """
    Render an image in the textual object format.

    One record per line, "ADDRESS: HEXBYTES | source-line", followed by a
    footer holding the entry address and the symbol table.

    Args:
        image: The image to render

    Returns:
        str: Object text, identical for identical images
    """
    lines = [
        f"0x{record.address:04x}: {record.data.hex()} | {record.source}"
        for record in image.records
    ]
    lines.append(f"# entry 0x{image.entry:04x}")
    for name in sorted(image.symbols):
        lines.append(f"# symbol {name} {image.symbols[name]:#06x}")
    return "\n".join(lines) + "\n"


def read_object(text: str) -> ObjectImage:
    """
    Parse the textual object format back into an image.

    Args:
        text: Object text produced by ``write_object``

    Returns:
        ObjectImage: The parsed image

    Raises:
        AssemblyError: If a line is not a record or footer line
    """
    records: List[ObjectRecord] = []
    symbols: Dict[str, int] = {}
    entry = 0
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        if not line:
            continue
        match = _RECORD_PATTERN.match(line)
        if match:
            address, hexbytes, source = match.groups()
            records.append(ObjectRecord(
                address=int(address, 16),
                data=bytes.fromhex(hexbytes),
                source=source,
                line_number=line_number,
                is_data=bool(_LONG_DIRECTIVE.search(source.split("#", 1)[0])),
            ))
            continue
        match = _ENTRY_PATTERN.match(line)
        if match:
            entry = int(match.group(1), 0)
            continue
        match = _SYMBOL_PATTERN.match(line)
        if match:
            symbols[match.group(1)] = int(match.group(2), 0)
            continue
        if line.startswith("#"):
            continue
        logger.error(f"Malformed object line {line_number}: {line}")
        raise AssemblyError("malformed object record", line_number, line)

    try:
        return ObjectImage(records=records, entry=entry, symbols=symbols)
    except ValueError as e:
        raise AssemblyError(str(e), 0)


def disassemble(image: ObjectImage) -> str:
    """
    Render an image back to assembly text that reassembles to the same bytes.

    Args:
        image: The image to disassemble

    Returns:
        str: Assembly source using absolute addresses
    """
    lines: List[str] = []
    cursor = None
    for record in sorted(image.records, key=lambda r: r.address):
        if record.address != cursor:
            lines.append(f".pos 0x{record.address:x}")
        if record.is_data:
            for offset in range(0, len(record.data), 4):
                word = int.from_bytes(record.data[offset:offset + 4], "little")
                lines.append(f".long 0x{word:08x}")
        else:
            offset = 0
            while offset < len(record.data):
                item, length = decode(record.data, offset)
                lines.append(item.render())
                offset += length
        cursor = record.end
    return "\n".join(lines) + "\n"
