"""isa - Y86 plus EMPA metainstruction encoding, decoding and assembly."""

from .instructions import (
    FwdDirection,
    Instruction,
    Item,
    MassMode,
    MetaInstruction,
    MetaKind,
    OpClass,
    NO_REGISTER,
    PSEUDO_REGISTER,
    REGISTER_IDS,
    REGISTER_NAMES,
    decode,
    encode,
    is_meta,
)
from .object_image import ObjectImage, ObjectRecord, disassemble, read_object, write_object
from .assembler import Assembler, assemble

__all__ = [
    "FwdDirection",
    "Instruction",
    "Item",
    "MassMode",
    "MetaInstruction",
    "MetaKind",
    "OpClass",
    "NO_REGISTER",
    "PSEUDO_REGISTER",
    "REGISTER_IDS",
    "REGISTER_NAMES",
    "decode",
    "encode",
    "is_meta",
    "ObjectImage",
    "ObjectRecord",
    "disassemble",
    "read_object",
    "write_object",
    "Assembler",
    "assemble",
]
