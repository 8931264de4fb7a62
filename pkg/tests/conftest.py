"""Pytest configuration and fixtures."""

import pytest
from fastapi.testclient import TestClient

from empasim.core import Simulator, SimulatorSettings, TimingConfig
from empasim.core.isa import ObjectImage
from empasim.main import app

WORD = 0xFFFFFFFF


class ReferenceY86:
    """
    Straight-line interpreter for plain Y86 images.

    Decodes bytes on its own and knows nothing about metainstructions or
    timing, so it serves as an oracle for single-core results.
    """

    REGISTER_COUNT = 8
    LENGTHS = {0x0: 1, 0x1: 1, 0x2: 2, 0x3: 6, 0x4: 6, 0x5: 6, 0x6: 2,
               0x7: 5, 0x8: 5, 0x9: 1, 0xA: 2, 0xB: 2, 0xC: 6}

    def __init__(self, image: ObjectImage, memory_size: int = 65536):
        self.memory = bytearray(memory_size)
        for address, data in image.regions():
            self.memory[address:address + len(data)] = data
        self.pc = image.entry
        self.registers = [0] * self.REGISTER_COUNT
        self.zf, self.sf, self.of = True, False, False
        self.steps = 0

    def _word(self, address: int) -> int:
        return int.from_bytes(self.memory[address:address + 4], "little")

    def _store(self, address: int, value: int) -> None:
        self.memory[address:address + 4] = (value & WORD).to_bytes(4, "little")

    def _condition(self, fn: int) -> bool:
        less = self.sf != self.of
        return [True, less or self.zf, less, self.zf, not self.zf, not less, not less and not self.zf][fn]

    def _alu(self, fn: int, a: int, b: int) -> int:
        if fn == 0:
            result = (b + a) & WORD
            self.of = (a >> 31) == (b >> 31) and (result >> 31) != (a >> 31)
        elif fn == 1:
            result = (b - a) & WORD
            self.of = (a >> 31) != (b >> 31) and (result >> 31) != (b >> 31)
        elif fn == 2:
            result, self.of = a & b, False
        else:
            result, self.of = a ^ b, False
        self.zf, self.sf = result == 0, bool(result >> 31)
        return result

    def run(self, max_steps: int = 1_000_000) -> list:
        """Execute until halt; returns the register file."""
        registers = self.registers
        while self.steps < max_steps:
            self.steps += 1
            pc = self.pc
            icode, fn = self.memory[pc] >> 4, self.memory[pc] & 0xF
            if icode not in self.LENGTHS:
                raise ValueError(f"reference interpreter cannot execute byte {self.memory[pc]:#x} at {pc:#x}")
            ra, rb = self.memory[pc + 1] >> 4, self.memory[pc + 1] & 0xF
            next_pc = pc + self.LENGTHS[icode]
            if icode == 0x0:
                return list(registers)
            if icode == 0x2:
                if self._condition(fn):
                    registers[rb] = registers[ra]
            elif icode == 0x3:
                registers[rb] = self._word(pc + 2)
            elif icode == 0x4:
                self._store((registers[rb] + self._word(pc + 2)) & WORD, registers[ra])
            elif icode == 0x5:
                registers[ra] = self._word((registers[rb] + self._word(pc + 2)) & WORD)
            elif icode == 0x6:
                registers[rb] = self._alu(fn, registers[ra], registers[rb])
            elif icode == 0x7:
                if self._condition(fn):
                    next_pc = self._word(pc + 1)
            elif icode == 0x8:
                registers[4] = (registers[4] - 4) & WORD
                self._store(registers[4], next_pc)
                next_pc = self._word(pc + 1)
            elif icode == 0x9:
                next_pc = self._word(registers[4])
                registers[4] = (registers[4] + 4) & WORD
            elif icode == 0xA:
                value = registers[ra]
                registers[4] = (registers[4] - 4) & WORD
                self._store(registers[4], value)
            elif icode == 0xB:
                value = self._word(registers[4])
                registers[4] = (registers[4] + 4) & WORD
                registers[ra] = value
            elif icode == 0xC:
                registers[rb] = self._alu(0, self._word(pc + 2), registers[rb])
            self.pc = next_pc
        raise RuntimeError("reference interpreter step budget exhausted")


@pytest.fixture
def timing():
    """The shipped timing configuration."""
    return TimingConfig.default()


@pytest.fixture
def simulator_settings():
    """Settings with the shipped defaults, independent of the environment."""
    return SimulatorSettings(
        pool_size=32,
        memory_size=65536,
        max_clocks=10_000_000,
        timing_path=None,
        check_invariants=False,
        recycle_latency=30,
        sumup_child_limit=30,
    )


@pytest.fixture
def simulator(simulator_settings, timing):
    """A Simulator on the default 32-core machine."""
    return Simulator(simulator_settings, timing)


@pytest.fixture
def reference():
    """Factory running an image on the reference interpreter."""
    def run(image: ObjectImage) -> list:
        return ReferenceY86(image).run()
    return run


@pytest.fixture
def client():
    """Test client with the application lifespan running."""
    with TestClient(app) as test_client:
        yield test_client


@pytest.fixture
def create_child_source():
    """A root that creates one child, waits for it and reads its result."""
    return """
        .pos    0
main:   irmovl  $5, %eax
        QCreate Child
        QWait
        rrmovl  %pr, %ebx       # child's link value
        halt

Child:  iaddl   $10, %eax
        QTerm
"""
