"""Tests for the core model."""

import pytest

from empasim.core import (
    CoreMode,
    CoreState,
    InvariantViolationError,
    SimulationFault,
    UninitializedPseudoRegisterError,
    assemble,
)
from empasim.core.cores import (
    ConditionCodes,
    CoreEventKind,
    CoreRecord,
    RegisterFile,
    access_register,
    clone_from,
    step_core,
)
from empasim.core.isa import PSEUDO_REGISTER
from empasim.core.machine import Memory


def _core_for(source: str, memory_size: int = 4096):
    memory = Memory(memory_size)
    image = assemble(source)
    core = CoreRecord(0)
    core.transition(CoreState.ALLOCATED)
    core.transition(CoreState.ENABLED)
    core.pc = memory.load(image)
    return core, memory


def _run_to_halt(core, memory, timing, limit: int = 1000):
    for _ in range(limit):
        event = step_core(core, memory, timing)
        if event.kind == CoreEventKind.HALTED:
            return event
    raise AssertionError("program did not halt")


class TestRegisterFile:
    """Tests for the architectural registers."""

    def test_values_wrap(self):
        registers = RegisterFile()
        registers[0] = -1
        registers[1] = 1 << 32
        assert registers[0] == 0xFFFFFFFF
        assert registers[1] == 0

    def test_copy_is_independent(self):
        registers = RegisterFile()
        copy = registers.copy()
        copy[2] = 9
        assert registers[2] == 0


class TestConditionCodes:
    """Tests for condition evaluation."""

    def test_initial_flags(self):
        assert ConditionCodes().as_dict() == {"ZF": True, "SF": False, "OF": False}

    @pytest.mark.parametrize("flags,condition,expected", [
        ((False, True, False), 2, True),     # l
        ((False, False, False), 2, False),
        ((True, False, False), 1, True),     # le
        ((False, False, False), 4, True),    # ne
        ((False, False, False), 6, True),    # g
        ((True, False, False), 6, False),
        ((False, True, True), 5, True),      # ge with overflow
    ])
    def test_holds(self, flags, condition, expected):
        assert ConditionCodes(*flags).holds(condition) is expected


class TestStateMachine:
    """Tests for core-level transitions."""

    def test_legal_cycle(self):
        core = CoreRecord(3)
        for state in (CoreState.ALLOCATED, CoreState.ENABLED, CoreState.BLOCKED,
                      CoreState.ENABLED, CoreState.ALLOCATED, CoreState.CREATED):
            core.transition(state)
        assert core.state == CoreState.CREATED

    def test_illegal_transition(self):
        core = CoreRecord(1)
        with pytest.raises(InvariantViolationError, match="illegal transition"):
            core.transition(CoreState.ENABLED)

    def test_identity_is_one_hot(self):
        assert CoreRecord(5).identity == 0b100000


class TestPseudoRegister:
    """Tests for the routing of the pseudo-register."""

    def test_root_reads_from_child(self):
        core = CoreRecord(0)
        core.latches.from_child.write(42)
        assert access_register(core, PSEUDO_REGISTER) == 42

    def test_root_write_goes_to_for_child(self):
        core = CoreRecord(0)
        assert access_register(core, PSEUDO_REGISTER, write=True, value=7) is None
        assert core.latches.for_child.value == 7

    def test_child_write_requests_transfer(self):
        core = CoreRecord(2)
        core.parent = 0b1
        request = access_register(core, PSEUDO_REGISTER, write=True, value=11)
        assert request.core == 2 and request.value == 11
        assert core.latches.for_parent.value == 11

    def test_mass_parent_acts_as_parent(self):
        core = CoreRecord(2)
        core.parent = 0b1
        core.mode = CoreMode.SUMUP_PARENT
        core.latches.from_child.write(3)
        assert access_register(core, PSEUDO_REGISTER) == 3

    def test_uninitialized_read(self):
        core = CoreRecord(1)
        core.parent = 0b1
        with pytest.raises(UninitializedPseudoRegisterError, match="from_parent"):
            access_register(core, PSEUDO_REGISTER)

    def test_invalid_register_id(self):
        with pytest.raises(SimulationFault, match="invalid register id"):
            access_register(CoreRecord(0), 9)


class TestCloning:
    """Tests for glue cloning."""

    def test_clone_copies_registers_and_for_child(self):
        parent, child = CoreRecord(0), CoreRecord(1)
        parent.regs[3] = 99
        parent.cc = ConditionCodes(False, True, False)
        parent.latches.for_child.write(0x40)
        child.transition(CoreState.ALLOCATED)
        clone_from(parent, child, 0x100)
        assert child.regs[3] == 99
        assert child.cc == parent.cc
        assert child.pc == 0x100
        assert child.latches.from_parent.value == 0x40

    def test_clone_requires_allocated_child(self):
        with pytest.raises(InvariantViolationError):
            clone_from(CoreRecord(0), CoreRecord(1), 0)


class TestExecution:
    """Tests for step_core."""

    def test_arithmetic_and_flags(self, timing):
        core, memory = _core_for("""
            irmovl $5, %eax
            irmovl $7, %ebx
            subl %ebx, %eax
            halt
""")
        _run_to_halt(core, memory, timing)
        assert core.regs[0] == 0xFFFFFFFE
        assert core.cc.as_dict() == {"ZF": False, "SF": True, "OF": False}

    def test_memory_and_stack(self, timing):
        core, memory = _core_for("""
            irmovl Stack, %esp
            irmovl $0x1234, %eax
            rmmovl %eax, 8(%esp)
            call Func
            halt
Func:       mrmovl 12(%esp), %ecx
            pushl %ecx
            popl %edx
            ret
            .pos 0x200
Stack:
""")
        _run_to_halt(core, memory, timing)
        assert memory.read_word(0x208) == 0x1234
        assert core.regs[1] == 0x1234
        assert core.regs[2] == 0x1234
        assert core.regs[4] == 0x200

    def test_conditional_move_and_jump(self, timing):
        core, memory = _core_for("""
            irmovl $3, %eax
            irmovl $3, %ebx
            subl %eax, %ebx
            cmove %eax, %ecx
            jne Skip
            iaddl $1, %ecx
Skip:       halt
""")
        _run_to_halt(core, memory, timing)
        assert core.regs[1] == 4

    def test_event_reports_cost(self, timing):
        core, memory = _core_for("mrmovl 0(%eax), %ebx\nhalt\n")
        event = step_core(core, memory, timing)
        assert event.kind == CoreEventKind.EXECUTED
        assert event.clocks == timing.mrmovl

    def test_meta_left_to_supervisor(self, timing):
        core, memory = _core_for("QTerm\n")
        event = step_core(core, memory, timing)
        assert event.kind == CoreEventKind.META_RAISED
        assert core.pc == 0

    def test_memory_fault(self, timing):
        core, memory = _core_for("irmovl $0x2000, %ebx\nmrmovl (%ebx), %eax\nhalt\n", memory_size=4096)
        step_core(core, memory, timing)
        with pytest.raises(SimulationFault) as info:
            step_core(core, memory, timing)
        assert info.value.core_id == 0
        assert info.value.pc == 6

    def test_sumup_child_only_adds_to_pseudo_register(self, timing):
        core, memory = _core_for("subl %esi, %pr\nhalt\n")
        core.parent = 0b10
        core.mode = CoreMode.SUMUP_CHILD
        with pytest.raises(SimulationFault, match="SUMUP"):
            step_core(core, memory, timing)

    def test_sumup_child_ships_summand(self, timing):
        core, memory = _core_for("addl %esi, %pr\nhalt\n")
        core.parent = 0b10
        core.mode = CoreMode.SUMUP_CHILD
        core.regs[6] = 17
        event = step_core(core, memory, timing)
        assert [request.value for request in event.requests] == [17]

    def test_disabled_core_makes_no_progress(self, timing):
        core = CoreRecord(4)
        event = step_core(core, Memory(16), timing)
        assert event.kind == CoreEventKind.BLOCKED_NO_PROGRESS
