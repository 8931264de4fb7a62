"""Y86 instructions and EMPA metainstructions: types, encoding and decoding."""

import logging
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..errors import InvalidInstructionError

logger = logging.getLogger(__name__)

WORD_MASK = 0xFFFFFFFF

REGISTER_NAMES: List[str] = [
    "%eax", "%ecx", "%edx", "%ebx", "%esp", "%ebp", "%esi", "%edi", "%pr",
]
REGISTER_IDS: Dict[str, int] = {name: index for index, name in enumerate(REGISTER_NAMES)}
PSEUDO_REGISTER = 8
NO_REGISTER = 0xF

META_ICODE = 0xF


class OpClass(str, Enum):
    """Executable instruction classes; the value doubles as the timing key."""
    HALT = "halt"
    NOP = "nop"
    RRMOVL = "rrmovl"
    IRMOVL = "irmovl"
    RMMOVL = "rmmovl"
    MRMOVL = "mrmovl"
    OPL = "opl"
    JXX = "jxx"
    CALL = "call"
    RET = "ret"
    PUSHL = "pushl"
    POPL = "popl"
    IADDL = "iaddl"


class MetaKind(str, Enum):
    """Metainstruction kinds; the value doubles as the timing key."""
    QCREATE = "qcreate"
    QTERM = "qterm"
    QWAIT = "qwait"
    QPREALLOC = "qprealloc"
    QMASS = "qmass"
    QFWD = "qfwd"


class MassMode(str, Enum):
    """Mass processing modes of QMass."""
    FOR = "FOR"
    SUMUP = "SUMUP"


class FwdDirection(str, Enum):
    """Direction of a QFwd copy between pseudo-register latches."""
    UP = "up"      # from_child -> for_parent
    DOWN = "down"  # from_parent -> for_child


ICODES: Dict[OpClass, int] = {
    OpClass.HALT: 0x0,
    OpClass.NOP: 0x1,
    OpClass.RRMOVL: 0x2,
    OpClass.IRMOVL: 0x3,
    OpClass.RMMOVL: 0x4,
    OpClass.MRMOVL: 0x5,
    OpClass.OPL: 0x6,
    OpClass.JXX: 0x7,
    OpClass.CALL: 0x8,
    OpClass.RET: 0x9,
    OpClass.PUSHL: 0xA,
    OpClass.POPL: 0xB,
    OpClass.IADDL: 0xC,
}
OP_CLASSES: Dict[int, OpClass] = {code: op for op, code in ICODES.items()}

LENGTHS: Dict[OpClass, int] = {
    OpClass.HALT: 1,
    OpClass.NOP: 1,
    OpClass.RRMOVL: 2,
    OpClass.IRMOVL: 6,
    OpClass.RMMOVL: 6,
    OpClass.MRMOVL: 6,
    OpClass.OPL: 2,
    OpClass.JXX: 5,
    OpClass.CALL: 5,
    OpClass.RET: 1,
    OpClass.PUSHL: 2,
    OpClass.POPL: 2,
    OpClass.IADDL: 6,
}

# Classes whose encoding carries a register byte or a constant word.
REGISTER_OPERANDS = frozenset({
    OpClass.RRMOVL, OpClass.IRMOVL, OpClass.RMMOVL, OpClass.MRMOVL,
    OpClass.OPL, OpClass.PUSHL, OpClass.POPL, OpClass.IADDL,
})
VALUE_OPERANDS = frozenset({
    OpClass.IRMOVL, OpClass.RMMOVL, OpClass.MRMOVL, OpClass.IADDL, OpClass.JXX, OpClass.CALL,
})

# Function codes: condition for rrmovl/cmovXX and jXX, operation for OPl.
CONDITION_NAMES: List[str] = ["", "le", "l", "e", "ne", "ge", "g"]
ALU_NAMES: List[str] = ["addl", "subl", "andl", "xorl"]
MAX_FUNCTION: Dict[OpClass, int] = {
    OpClass.RRMOVL: len(CONDITION_NAMES) - 1,
    OpClass.JXX: len(CONDITION_NAMES) - 1,
    OpClass.OPL: len(ALU_NAMES) - 1,
}

# Meta sub-function nibble.
META_FUNCTIONS: Dict[Tuple[MetaKind, Optional[str]], int] = {
    (MetaKind.QCREATE, None): 0x0,
    (MetaKind.QTERM, None): 0x1,
    (MetaKind.QWAIT, None): 0x2,
    (MetaKind.QPREALLOC, None): 0x3,
    (MetaKind.QMASS, MassMode.FOR.value): 0x4,
    (MetaKind.QMASS, MassMode.SUMUP.value): 0x5,
    (MetaKind.QFWD, FwdDirection.UP.value): 0x6,
    (MetaKind.QFWD, FwdDirection.DOWN.value): 0x7,
}
META_LENGTHS: Dict[MetaKind, int] = {
    MetaKind.QCREATE: 5,
    MetaKind.QTERM: 1,
    MetaKind.QWAIT: 1,
    MetaKind.QPREALLOC: 5,
    MetaKind.QMASS: 10,
    MetaKind.QFWD: 1,
}

# Model fields each kind carries in its encoding; the others keep their defaults.
META_OPERANDS: Dict[MetaKind, frozenset] = {
    MetaKind.QCREATE: frozenset({"target"}),
    MetaKind.QTERM: frozenset(),
    MetaKind.QWAIT: frozenset(),
    MetaKind.QPREALLOC: frozenset({"count"}),
    MetaKind.QMASS: frozenset({"mass_mode", "count_register", "address_register", "stride", "target"}),
    MetaKind.QFWD: frozenset({"direction"}),
}


def register_name(register_id: int) -> str:
    """Return the assembly name of a register id."""
    return REGISTER_NAMES[register_id]


class Instruction(BaseModel):
    """An executable Y86 instruction.

    ``value`` holds the immediate, displacement or destination as an unsigned
    32-bit number; unused register fields hold ``NO_REGISTER``.
    """

    model_config = ConfigDict(frozen=True)

    op: OpClass = Field(..., description="Instruction class")
    fn: int = Field(default=0, ge=0, le=0xF, description="Function code (condition or ALU operation)")
    ra: int = Field(default=NO_REGISTER, ge=0, le=0xF, description="Register A id")
    rb: int = Field(default=NO_REGISTER, ge=0, le=0xF, description="Register B id")
    value: int = Field(default=0, ge=0, le=WORD_MASK, description="32-bit constant word")

    @model_validator(mode="after")
    def check_operands(self) -> "Instruction":
        """Ensure the fields are legal for the class and carried by its encoding."""
        if self.fn > MAX_FUNCTION.get(self.op, 0):
            raise ValueError(f"function code {self.fn} is not valid for {self.op.value}")
        if self.op not in REGISTER_OPERANDS and (self.ra, self.rb) != (NO_REGISTER, NO_REGISTER):
            raise ValueError(f"{self.op.value} takes no register operands")
        if self.op not in VALUE_OPERANDS and self.value != 0:
            raise ValueError(f"{self.op.value} takes no constant word")
        for register_id in (self.ra, self.rb):
            if register_id > PSEUDO_REGISTER and register_id != NO_REGISTER:
                raise ValueError(f"register id {register_id} out of range")
        return self

    @property
    def length(self) -> int:
        """Encoded length in bytes."""
        return LENGTHS[self.op]

    @property
    def mnemonic(self) -> str:
        """Assembly mnemonic including condition or ALU suffix."""
        if self.op == OpClass.RRMOVL:
            return "rrmovl" if self.fn == 0 else f"cmov{CONDITION_NAMES[self.fn]}"
        if self.op == OpClass.JXX:
            return "jmp" if self.fn == 0 else f"j{CONDITION_NAMES[self.fn]}"
        if self.op == OpClass.OPL:
            return ALU_NAMES[self.fn]
        return self.op.value

    @property
    def signed_value(self) -> int:
        """The constant word as a signed 32-bit integer."""
        return self.value - (1 << 32) if self.value & 0x80000000 else self.value

    def render(self) -> str:
        """Render the instruction back to assembly text."""
        op = self.op
        if op in (OpClass.HALT, OpClass.NOP, OpClass.RET):
            return self.mnemonic
        if op in (OpClass.RRMOVL, OpClass.OPL):
            return f"{self.mnemonic} {register_name(self.ra)}, {register_name(self.rb)}"
        if op in (OpClass.IRMOVL, OpClass.IADDL):
            return f"{self.mnemonic} ${self.signed_value}, {register_name(self.rb)}"
        if op == OpClass.RMMOVL:
            return f"rmmovl {register_name(self.ra)}, {self.signed_value}({register_name(self.rb)})"
        if op == OpClass.MRMOVL:
            return f"mrmovl {self.signed_value}({register_name(self.rb)}), {register_name(self.ra)}"
        if op in (OpClass.JXX, OpClass.CALL):
            return f"{self.mnemonic} 0x{self.value:x}"
        return f"{self.mnemonic} {register_name(self.ra)}"


class MetaInstruction(BaseModel):
    """An EMPA metainstruction serviced by the supervisor."""

    model_config = ConfigDict(frozen=True)

    kind: MetaKind = Field(..., description="Metainstruction kind")
    target: int = Field(default=0, ge=0, le=WORD_MASK, description="QCreate target or QMass body address")
    count: int = Field(default=0, ge=0, le=WORD_MASK, description="QPrealloc core count")
    mass_mode: Optional[MassMode] = Field(default=None, description="QMass mode")
    count_register: int = Field(default=NO_REGISTER, ge=0, le=0xF, description="QMass count source")
    address_register: int = Field(default=NO_REGISTER, ge=0, le=0xF, description="QMass address source")
    stride: int = Field(default=0, ge=-(1 << 31), lt=(1 << 31), description="QMass address stride in bytes")
    direction: Optional[FwdDirection] = Field(default=None, description="QFwd direction")

    @model_validator(mode="after")
    def check_fields(self) -> "MetaInstruction":
        """Ensure the fields required by the kind are present and legal."""
        if self.kind == MetaKind.QMASS:
            if self.mass_mode is None:
                raise ValueError("QMass requires a mode")
            if self.stride == 0:
                raise ValueError("QMass stride must be nonzero")
            for register_id in (self.count_register, self.address_register):
                if register_id >= PSEUDO_REGISTER:
                    raise ValueError("QMass sources must be architectural registers")
        if self.kind == MetaKind.QFWD and self.direction is None:
            raise ValueError("QFwd requires a direction")
        if self.kind == MetaKind.QPREALLOC and self.count < 1:
            raise ValueError("QPrealloc count must be at least 1")
        for name, field in type(self).model_fields.items():
            if name != "kind" and name not in META_OPERANDS[self.kind] and getattr(self, name) != field.default:
                raise ValueError(f"{self.kind.value} does not carry {name}")
        return self

    @property
    def length(self) -> int:
        """Encoded length in bytes."""
        return META_LENGTHS[self.kind]

    @property
    def function(self) -> int:
        """Sub-function nibble of the encoding."""
        qualifier = None
        if self.kind == MetaKind.QMASS:
            qualifier = self.mass_mode.value
        elif self.kind == MetaKind.QFWD:
            qualifier = self.direction.value
        return META_FUNCTIONS[(self.kind, qualifier)]

    @property
    def mnemonic(self) -> str:
        """Assembly mnemonic."""
        return {
            MetaKind.QCREATE: "QCreate",
            MetaKind.QTERM: "QTerm",
            MetaKind.QWAIT: "QWait",
            MetaKind.QPREALLOC: "QPrealloc",
            MetaKind.QMASS: "QMass",
            MetaKind.QFWD: "QFwd",
        }[self.kind]

    def render(self) -> str:
        """Render the metainstruction back to assembly text."""
        if self.kind == MetaKind.QCREATE:
            return f"QCreate 0x{self.target:x}"
        if self.kind == MetaKind.QPREALLOC:
            return f"QPrealloc {self.count}"
        if self.kind == MetaKind.QMASS:
            return (
                f"QMass {self.mass_mode.value}, {register_name(self.count_register)}, "
                f"{register_name(self.address_register)}, {self.stride}, 0x{self.target:x}"
            )
        if self.kind == MetaKind.QFWD:
            return f"QFwd {self.direction.value}"
        return self.mnemonic


Item = Union[Instruction, MetaInstruction]


def is_meta(first_byte: int) -> bool:
    """Classify an item as meta from its first byte alone."""
    return (first_byte >> 4) == META_ICODE


def _word(value: int) -> bytes:
    return (value & WORD_MASK).to_bytes(4, "little")


def encode(item: Item) -> bytes:
    """
    Encode an instruction or metainstruction.

    Args:
        item: The item to encode

    Returns:
        bytes: The encoded item, ``item.length`` bytes long
    """
    if isinstance(item, MetaInstruction):
        head = bytes([(META_ICODE << 4) | item.function])
        if item.kind in (MetaKind.QCREATE,):
            return head + _word(item.target)
        if item.kind == MetaKind.QPREALLOC:
            return head + _word(item.count)
        if item.kind == MetaKind.QMASS:
            registers = bytes([(item.count_register << 4) | item.address_register])
            return head + registers + item.stride.to_bytes(4, "little", signed=True) + _word(item.target)
        return head

    head = bytes([(ICODES[item.op] << 4) | item.fn])
    registers = bytes([(item.ra << 4) | item.rb])
    op = item.op
    if op in (OpClass.HALT, OpClass.NOP, OpClass.RET):
        return head
    if op in (OpClass.RRMOVL, OpClass.OPL, OpClass.PUSHL, OpClass.POPL):
        return head + registers
    if op in (OpClass.JXX, OpClass.CALL):
        return head + _word(item.value)
    return head + registers + _word(item.value)


def decode(data: Sequence[int], address: int) -> Tuple[Item, int]:
    """
    Decode the item starting at an address.

    Args:
        data: Byte-addressable image (bytes, bytearray or memory view)
        address: Address of the first byte of the item

    Returns:
        Tuple[Item, int]: The decoded item and its encoded length

    Raises:
        InvalidInstructionError: If the opcode byte is unknown, operands are
            malformed or the item runs past the end of the image
    """
    if address < 0 or address >= len(data):
        raise InvalidInstructionError("fetch outside the image", address)
    first = data[address]
    icode, function = first >> 4, first & 0xF

    if icode == META_ICODE:
        return _decode_meta(data, address, function)

    op = OP_CLASSES.get(icode)
    if op is None:
        raise InvalidInstructionError(f"unknown opcode byte 0x{first:02x}", address)
    length = LENGTHS[op]
    raw = _take(data, address, length)

    ra = rb = NO_REGISTER
    value = 0
    if op in REGISTER_OPERANDS:
        ra, rb = raw[1] >> 4, raw[1] & 0xF
    if op in (OpClass.JXX, OpClass.CALL):
        value = int.from_bytes(raw[1:5], "little")
    elif length == 6:
        value = int.from_bytes(raw[2:6], "little")

    try:
        return Instruction(op=op, fn=function, ra=ra, rb=rb, value=value), length
    except ValueError as e:
        raise InvalidInstructionError(f"malformed {op.value} (0x{raw.hex()}): {e}", address)


def _decode_meta(data: Sequence[int], address: int, function: int) -> Tuple[MetaInstruction, int]:
    lookup = {code: key for key, code in META_FUNCTIONS.items()}
    if function not in lookup:
        raise InvalidInstructionError(f"unknown metainstruction function {function:#x}", address)
    kind, qualifier = lookup[function]
    length = META_LENGTHS[kind]
    raw = _take(data, address, length)

    fields = {"kind": kind}
    if kind == MetaKind.QCREATE:
        fields["target"] = int.from_bytes(raw[1:5], "little")
    elif kind == MetaKind.QPREALLOC:
        fields["count"] = int.from_bytes(raw[1:5], "little")
    elif kind == MetaKind.QMASS:
        fields.update(
            mass_mode=MassMode(qualifier),
            count_register=raw[1] >> 4,
            address_register=raw[1] & 0xF,
            stride=int.from_bytes(raw[2:6], "little", signed=True),
            target=int.from_bytes(raw[6:10], "little"),
        )
    elif kind == MetaKind.QFWD:
        fields["direction"] = FwdDirection(qualifier)

    try:
        return MetaInstruction(**fields), length
    except ValueError as e:
        raise InvalidInstructionError(f"malformed {kind.value} (0x{raw.hex()}): {e}", address)


def _take(data: Sequence[int], address: int, length: int) -> bytes:
    if address + length > len(data):
        raise InvalidInstructionError(f"item of {length} bytes truncated", address)
    return bytes(data[address:address + length])
