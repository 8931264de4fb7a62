"""Two-pass assembler for Y86 extended with EMPA metainstructions."""

import logging
import re
from typing import Callable, Dict, List, Optional, Tuple

from ..errors import AssemblyError
from .instructions import (
    ALU_NAMES,
    CONDITION_NAMES,
    LENGTHS,
    META_LENGTHS,
    REGISTER_IDS,
    WORD_MASK,
    FwdDirection,
    Instruction,
    Item,
    MassMode,
    MetaInstruction,
    MetaKind,
    OpClass,
    encode,
)
from .object_image import ObjectImage, ObjectRecord

logger = logging.getLogger(__name__)

_LABEL_PATTERN = re.compile(r"^\s*([A-Za-z_][\w.]*)\s*:")
_SYMBOL_PATTERN = re.compile(r"^[A-Za-z_][\w.]*$")
_MEMORY_PATTERN = re.compile(r"^(.*)\(\s*(%\w+)\s*\)$")
_OPERAND_PATTERN = re.compile(r"[+-]?\s*[\w.]+(?:\s*[+-]\s*[\w.]+)*")
_TERM_PATTERN = re.compile(r"([+-]?)\s*([\w.]+)")

MIN_IMMEDIATE = -(1 << 31)
MAX_IMMEDIATE = WORD_MASK


class _Statement:
    """One non-empty source line after label stripping."""

    def __init__(self, line_number: int, source: str, mnemonic: str, operands: List[str]):
        self.line_number = line_number
        self.source = source
        self.mnemonic = mnemonic
        self.operands = operands
        self.address = 0


class _Resolver:
    """Turns operand text into numbers and register ids for one statement."""

    def __init__(self, statement: _Statement, symbols: Dict[str, int], final: bool):
        self.statement = statement
        self.symbols = symbols
        self.final = final

    def fail(self, message: str) -> AssemblyError:
        logger.error(f"Assembly failed at line {self.statement.line_number}: {message}")
        return AssemblyError(message, self.statement.line_number, self.statement.source)

    def expect(self, count: int) -> List[str]:
        operands = self.statement.operands
        if len(operands) != count:
            raise self.fail(
                f"malformed operand list for {self.statement.mnemonic}: "
                f"expected {count} operand(s), got {len(operands)}"
            )
        return operands

    def register(self, text: str) -> int:
        register_id = REGISTER_IDS.get(text.strip().lower())
        if register_id is None:
            raise self.fail(f"malformed operand '{text}': expected a register")
        return register_id

    def value(self, text: str) -> int:
        """Evaluate a number, symbol or a +/- combination of them."""
        text = text.strip()
        if text.startswith("$"):
            text = text[1:].strip()
        if not text:
            raise self.fail("malformed operand: empty value")
        if not _OPERAND_PATTERN.fullmatch(text):
            raise self.fail(f"malformed operand '{text}'")
        total = 0
        for sign, body in _TERM_PATTERN.findall(text):
            total += (-1 if sign == "-" else 1) * self._term(body)
        if total < MIN_IMMEDIATE or total > MAX_IMMEDIATE:
            raise self.fail(f"immediate overflow: {text} does not fit in 32 bits")
        return total

    def _term(self, body: str) -> int:
        try:
            return int(body, 0)
        except ValueError:
            pass
        if not _SYMBOL_PATTERN.match(body):
            raise self.fail(f"malformed operand '{body}'")
        if body in self.symbols:
            return self.symbols[body]
        if self.final:
            raise self.fail(f"undefined label '{body}'")
        return 0

    def word(self, text: str) -> int:
        return self.value(text) & WORD_MASK

    def memory(self, text: str) -> Tuple[int, int]:
        """Parse ``D(%reg)`` or ``(%reg)`` into (displacement, register)."""
        match = _MEMORY_PATTERN.match(text.strip())
        if not match:
            raise self.fail(f"malformed operand '{text}': expected D(%reg)")
        displacement, register = match.groups()
        offset = self.word(displacement) if displacement.strip() else 0
        return offset, self.register(register)


Encoder = Callable[[_Resolver], Item]


def _no_operands(op: OpClass) -> Encoder:
    def build(resolver: _Resolver) -> Item:
        resolver.expect(0)
        return Instruction(op=op)
    return build


def _register_pair(op: OpClass, fn: int) -> Encoder:
    def build(resolver: _Resolver) -> Item:
        source, destination = resolver.expect(2)
        return Instruction(op=op, fn=fn, ra=resolver.register(source), rb=resolver.register(destination))
    return build


def _immediate(op: OpClass) -> Encoder:
    def build(resolver: _Resolver) -> Item:
        constant, destination = resolver.expect(2)
        return Instruction(op=op, rb=resolver.register(destination), value=resolver.word(constant))
    return build


def _store(resolver: _Resolver) -> Item:
    source, destination = resolver.expect(2)
    offset, base = resolver.memory(destination)
    return Instruction(op=OpClass.RMMOVL, ra=resolver.register(source), rb=base, value=offset)


def _load(resolver: _Resolver) -> Item:
    source, destination = resolver.expect(2)
    offset, base = resolver.memory(source)
    return Instruction(op=OpClass.MRMOVL, ra=resolver.register(destination), rb=base, value=offset)


def _destination(op: OpClass, fn: int = 0) -> Encoder:
    def build(resolver: _Resolver) -> Item:
        (target,) = resolver.expect(1)
        return Instruction(op=op, fn=fn, value=resolver.word(target))
    return build


def _stack(op: OpClass) -> Encoder:
    def build(resolver: _Resolver) -> Item:
        (register,) = resolver.expect(1)
        return Instruction(op=op, ra=resolver.register(register))
    return build


def _qcreate(resolver: _Resolver) -> Item:
    (target,) = resolver.expect(1)
    return MetaInstruction(kind=MetaKind.QCREATE, target=resolver.word(target))


def _bare_meta(kind: MetaKind) -> Encoder:
    def build(resolver: _Resolver) -> Item:
        resolver.expect(0)
        return MetaInstruction(kind=kind)
    return build


def _qprealloc(resolver: _Resolver) -> Item:
    (count,) = resolver.expect(1)
    value = resolver.value(count)
    if resolver.final and value < 1:
        raise resolver.fail(f"malformed operand '{count}': QPrealloc needs at least one core")
    return MetaInstruction(kind=MetaKind.QPREALLOC, count=max(value, 1))


def _qmass(resolver: _Resolver) -> Item:
    mode, count_register, address_register, stride, body = resolver.expect(5)
    try:
        mass_mode = MassMode(mode.strip().upper())
    except ValueError:
        raise resolver.fail(f"malformed operand '{mode}': expected FOR or SUMUP")
    count_id = resolver.register(count_register)
    address_id = resolver.register(address_register)
    if max(count_id, address_id) >= REGISTER_IDS["%pr"]:
        raise resolver.fail("malformed operand: QMass sources must be architectural registers")
    step = resolver.value(stride)
    if step == 0 or not MIN_IMMEDIATE <= step < (1 << 31):
        raise resolver.fail(f"malformed operand '{stride}': stride must be a nonzero signed 32-bit value")
    return MetaInstruction(
        kind=MetaKind.QMASS,
        mass_mode=mass_mode,
        count_register=count_id,
        address_register=address_id,
        stride=step,
        target=resolver.word(body),
    )


def _qfwd(resolver: _Resolver) -> Item:
    (direction,) = resolver.expect(1)
    try:
        return MetaInstruction(kind=MetaKind.QFWD, direction=FwdDirection(direction.strip().lower()))
    except ValueError:
        raise resolver.fail(f"malformed operand '{direction}': expected up or down")


def _build_table() -> Dict[str, Tuple[int, Encoder]]:
    table: Dict[str, Tuple[int, Encoder]] = {
        "halt": (LENGTHS[OpClass.HALT], _no_operands(OpClass.HALT)),
        "nop": (LENGTHS[OpClass.NOP], _no_operands(OpClass.NOP)),
        "ret": (LENGTHS[OpClass.RET], _no_operands(OpClass.RET)),
        "irmovl": (LENGTHS[OpClass.IRMOVL], _immediate(OpClass.IRMOVL)),
        "iaddl": (LENGTHS[OpClass.IADDL], _immediate(OpClass.IADDL)),
        "rmmovl": (LENGTHS[OpClass.RMMOVL], _store),
        "mrmovl": (LENGTHS[OpClass.MRMOVL], _load),
        "call": (LENGTHS[OpClass.CALL], _destination(OpClass.CALL)),
        "pushl": (LENGTHS[OpClass.PUSHL], _stack(OpClass.PUSHL)),
        "popl": (LENGTHS[OpClass.POPL], _stack(OpClass.POPL)),
        "qcreate": (META_LENGTHS[MetaKind.QCREATE], _qcreate),
        "qterm": (META_LENGTHS[MetaKind.QTERM], _bare_meta(MetaKind.QTERM)),
        "qwait": (META_LENGTHS[MetaKind.QWAIT], _bare_meta(MetaKind.QWAIT)),
        "qprealloc": (META_LENGTHS[MetaKind.QPREALLOC], _qprealloc),
        "qmass": (META_LENGTHS[MetaKind.QMASS], _qmass),
        "qfwd": (META_LENGTHS[MetaKind.QFWD], _qfwd),
    }
    for fn, condition in enumerate(CONDITION_NAMES):
        move = "rrmovl" if fn == 0 else f"cmov{condition}"
        jump = "jmp" if fn == 0 else f"j{condition}"
        table[move] = (LENGTHS[OpClass.RRMOVL], _register_pair(OpClass.RRMOVL, fn))
        table[jump] = (LENGTHS[OpClass.JXX], _destination(OpClass.JXX, fn))
    for fn, name in enumerate(ALU_NAMES):
        table[name] = (LENGTHS[OpClass.OPL], _register_pair(OpClass.OPL, fn))
    return table


MNEMONICS = _build_table()
DIRECTIVES = (".pos", ".align", ".long", ".equ")


class Assembler:
    """
    Translate extended Y86 source text into an ObjectImage.

    Pass 1 assigns addresses and builds the symbol table, pass 2 encodes.
    Supported directives are ``.pos``, ``.align``, ``.long`` and ``.equ``.
    """

    def assemble(self, source: str) -> ObjectImage:
        """
        Assemble source text.

        Args:
            source: Program text in the extended Y86 syntax

        Returns:
            ObjectImage: Encoded program with symbols and listing

        Raises:
            AssemblyError: On undefined or duplicate labels, malformed
                operands, immediate overflow or overlapping regions
        """
        statements, symbols = self._first_pass(source)
        image = self._second_pass(statements, symbols)
        logger.info(
            f"Assembled {len(image.records)} records, {len(symbols)} symbols, entry 0x{image.entry:04x}"
        )
        return image

    def _first_pass(self, source: str) -> Tuple[List[_Statement], Dict[str, int]]:
        symbols: Dict[str, int] = {}
        statements: List[_Statement] = []
        address = 0

        for line_number, raw in enumerate(source.splitlines(), start=1):
            text = raw.split("#", 1)[0]
            source_line = raw.strip()

            while True:
                match = _LABEL_PATTERN.match(text)
                if not match:
                    break
                label = match.group(1)
                self._define(symbols, label, address, line_number, source_line)
                text = text[match.end():]

            text = text.strip()
            if not text:
                continue
            parts = text.split(None, 1)
            mnemonic = parts[0].lower()
            operands = [op.strip() for op in parts[1].split(",")] if len(parts) > 1 else []
            statement = _Statement(line_number, source_line, mnemonic, operands)
            resolver = _Resolver(statement, symbols, final=False)

            if mnemonic == ".equ":
                name, value = resolver.expect(2)
                if not _SYMBOL_PATTERN.match(name):
                    raise resolver.fail(f"malformed operand '{name}': expected a symbol name")
                resolver.final = True
                self._define(symbols, name, resolver.value(value), line_number, source_line)
                continue
            if mnemonic == ".pos":
                (target,) = resolver.expect(1)
                resolver.final = True
                address = resolver.word(target)
                continue
            if mnemonic == ".align":
                (boundary,) = resolver.expect(1)
                resolver.final = True
                alignment = resolver.value(boundary)
                if alignment < 1:
                    raise resolver.fail(f"malformed operand '{boundary}': alignment must be positive")
                address = -(-address // alignment) * alignment
                continue

            statement.address = address
            if mnemonic == ".long":
                resolver.expect(1)
                address += 4
            elif mnemonic in MNEMONICS:
                address += MNEMONICS[mnemonic][0]
            else:
                raise resolver.fail(f"unknown mnemonic '{parts[0]}'")
            statements.append(statement)

        return statements, symbols

    def _second_pass(self, statements: List[_Statement], symbols: Dict[str, int]) -> ObjectImage:
        records: List[ObjectRecord] = []
        entry: Optional[int] = None

        for statement in statements:
            resolver = _Resolver(statement, symbols, final=True)
            if statement.mnemonic == ".long":
                (value,) = statement.operands
                data = resolver.word(value).to_bytes(4, "little")
                is_data = True
            else:
                item = MNEMONICS[statement.mnemonic][1](resolver)
                data = encode(item)
                is_data = False
                if entry is None:
                    entry = statement.address
            records.append(ObjectRecord(
                address=statement.address,
                data=data,
                source=statement.source,
                line_number=statement.line_number,
                is_data=is_data,
            ))

        self._check_overlap(records)
        if entry is None:
            line_number = statements[-1].line_number if statements else 0
            logger.error("Assembly produced no instructions")
            raise AssemblyError("program contains no instructions", line_number)

        return ObjectImage(records=records, entry=entry, symbols=dict(symbols))

    @staticmethod
    def _define(symbols: Dict[str, int], name: str, value: int, line_number: int, source: str) -> None:
        if name in symbols:
            logger.error(f"Duplicate label '{name}' at line {line_number}")
            raise AssemblyError(f"duplicate label '{name}'", line_number, source)
        symbols[name] = value

    @staticmethod
    def _check_overlap(records: List[ObjectRecord]) -> None:
        ordered = sorted(records, key=lambda record: (record.address, record.line_number))
        for previous, current in zip(ordered, ordered[1:]):
            if current.address < previous.end:
                later = max(previous, current, key=lambda record: record.line_number)
                earlier = current if later is previous else previous
                logger.error(f"Overlapping region at line {later.line_number}")
                raise AssemblyError(
                    f"region at 0x{later.address:x} overlaps line {earlier.line_number}",
                    later.line_number,
                    later.source,
                )


def assemble(source: str) -> ObjectImage:
    """Assemble source text with a default Assembler."""
    return Assembler().assemble(source)
