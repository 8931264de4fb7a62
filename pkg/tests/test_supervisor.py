"""Tests for the supervisor's pool bookkeeping and operations."""

import pytest

from empasim.core import CoreMode, CoreState, InvariantViolationError, SimulationFault, TraceEventKind
from empasim.core.isa import MassMode, MetaInstruction, MetaKind
from empasim.core.supervisor import MAX_POOL_SIZE, Supervisor


@pytest.fixture
def supervisor(timing):
    """A four-core supervisor with the root running at address 0."""
    return Supervisor.create_pool(4, timing, entry=0)


def _qmass(mode: MassMode) -> MetaInstruction:
    return MetaInstruction(kind=MetaKind.QMASS, mass_mode=mode,
                           count_register=2, address_register=1, stride=4, target=0x40)


class TestPool:
    """Tests for pool creation."""

    @pytest.mark.parametrize("size", [0, MAX_POOL_SIZE + 1])
    def test_pool_size_range(self, timing, size):
        """Test pool size range."""
        with pytest.raises(ValueError, match="pool size"):
            Supervisor(size, timing)

    def test_root_started(self, supervisor):
        """Test root started."""
        assert supervisor.root.state == CoreState.ENABLED
        assert supervisor.pool == 0b1110
        assert supervisor.peak_cores == 1
        supervisor.check_invariants(1)


class TestAllocation:
    """Tests for allocate and terminate."""

    def test_allocate_links_parent_and_child(self, supervisor, timing):
        """Test allocate links parent and child."""
        supervisor.root.regs[0] = 5
        child = supervisor.allocate(0, 0x40, clock=1)
        assert child == 1
        core = supervisor.cores[1]
        assert core.state == CoreState.ENABLED
        assert core.parent == 0b1
        assert supervisor.root.children == 0b10
        assert core.pc == 0x40
        assert core.regs[0] == 5
        assert core.resume_at == 1 + timing.clone
        supervisor.check_invariants(1)

    def test_allocate_lowest_index_first(self, supervisor):
        """Test allocate lowest index first."""
        assert [supervisor.allocate(0, 0, clock=1) for _ in range(3)] == [1, 2, 3]
        assert supervisor.allocate(0, 0, clock=1) is None

    def test_terminate_returns_core_and_link(self, supervisor):
        """Test terminate returns core and link."""
        supervisor.allocate(0, 0x40, clock=1)
        supervisor.cores[1].regs[0] = 77
        assert supervisor.terminate(1, clock=5)
        assert supervisor.cores[1].state == CoreState.CREATED
        assert supervisor.pool == 0b1110
        assert supervisor.root.children == 0
        assert supervisor.root.latches.link.value == 77
        assert supervisor.root.latches.from_child.value == 77
        supervisor.check_invariants(5)

    def test_terminate_with_children_waits(self, supervisor):
        """Test terminate with children waits."""
        supervisor.allocate(0, 0x40, clock=1)
        supervisor.allocate(1, 0x80, clock=2)
        assert not supervisor.terminate(1, clock=3)
        assert supervisor.cores[1].state == CoreState.BLOCKED
        assert supervisor.terminate(2, clock=4)
        assert supervisor.cores[1].state == CoreState.CREATED
        assert supervisor.cores[2].state == CoreState.CREATED
        assert supervisor.root.children == 0

    def test_root_end_finishes_when_pool_full(self, supervisor):
        """Test root end finishes when pool full."""
        supervisor.allocate(0, 0x40, clock=1)
        supervisor.end_root(clock=2)
        assert not supervisor.finished
        supervisor.terminate(1, clock=3)
        assert supervisor.finished


class TestPreallocation:
    """Tests for QPrealloc reservations."""

    def test_partial_reservation(self, supervisor):
        """Test partial reservation."""
        missing = supervisor.preallocate(0, 5, clock=1)
        assert missing == 2
        assert supervisor.root.preallocated == 0b1110
        assert supervisor.pool == 0
        assert supervisor.peak_cores == 4
        supervisor.check_invariants(1)

    def test_reserved_cores_used_first(self, supervisor):
        """Test reserved cores used first."""
        supervisor.preallocate(0, 1, clock=1)
        assert supervisor.allocate(0, 0, clock=2) == 1
        assert supervisor.root.preallocated == 0

    def test_root_end_releases_reservation(self, supervisor):
        """Test root end releases reservation."""
        supervisor.preallocate(0, 2, clock=1)
        supervisor.end_root(clock=2)
        assert supervisor.finished
        assert any(event.kind == TraceEventKind.RELEASE for event in supervisor.recorder.events)


class TestQueue:
    """Tests for queued operations."""

    def test_one_operation_per_clock(self, supervisor):
        """Test one operation per clock."""
        supervisor.allocate(0, 0x40, clock=1)
        supervisor.enqueue(0, MetaInstruction(kind=MetaKind.QPREALLOC, count=1), clock=2)
        supervisor.enqueue(1, MetaInstruction(kind=MetaKind.QTERM), clock=2)
        supervisor.tick(2)
        assert len(supervisor.queue) == 1
        # QPrealloc keeps the supervisor busy for two clocks
        supervisor.tick(3)
        assert len(supervisor.queue) == 1
        supervisor.tick(4)
        assert not supervisor.queue
        supervisor.check_invariants(4)

    def test_blocked_allocation_retried(self, timing):
        """Test blocked allocation retried."""
        supervisor = Supervisor.create_pool(2, timing, entry=0)
        supervisor.allocate(0, 0x40, clock=1)
        supervisor.enqueue(0, MetaInstruction(kind=MetaKind.QCREATE, target=0x80), clock=2)
        supervisor.tick(2)
        assert supervisor.root.state == CoreState.BLOCKED
        assert supervisor.next_activity(2) is None
        supervisor.terminate(1, clock=3)
        assert supervisor.next_activity(3) == 4
        supervisor.tick(4)
        assert supervisor.root.state == CoreState.ENABLED
        assert supervisor.root.children == 0b10
        retries = [event for event in supervisor.recorder.events if event.detail.endswith(" retry")]
        assert len(retries) == 1


class TestMassProcessing:
    """Tests for FOR and SUMUP controllers."""

    def test_qmass_needs_reservation(self, supervisor):
        """Test QMass needs reservation."""
        with pytest.raises(SimulationFault, match="preallocated"):
            supervisor.mass_begin(0, _qmass(MassMode.FOR), clock=1)

    def test_zero_count_retires_immediately(self, supervisor, timing):
        """Test zero count retires immediately."""
        supervisor.preallocate(0, 1, clock=1)
        supervisor.root.pc = 0x10
        supervisor.mass_begin(0, _qmass(MassMode.SUMUP), clock=3)
        assert not supervisor.controllers
        assert supervisor.root.state == CoreState.ENABLED
        assert supervisor.root.pc == 0x1A
        assert supervisor.root.resume_at == 3 + timing.qmass
        assert supervisor.root.latches.from_child.value == 0

    def test_sumup_launch_and_accumulate(self, supervisor, timing):
        """Test SUMUP launch and accumulate."""
        root = supervisor.root
        root.regs[2] = 2
        root.regs[1] = 0x100
        supervisor.preallocate(0, 2, clock=1)
        controller = supervisor.mass_begin(0, _qmass(MassMode.SUMUP), clock=3)
        assert root.mode == CoreMode.SUMUP_PARENT
        supervisor.mass_step(controller, 5)
        supervisor.mass_step(controller, 6)
        assert controller.active_children == 0b110
        assert supervisor.cores[1].latches.from_parent.value == 0x100
        assert supervisor.cores[2].latches.from_parent.value == 0x104
        assert supervisor.cores[2].mode == CoreMode.SUMUP_CHILD

        controller.pending.extend([3, 4])
        supervisor.terminate(1, clock=10)
        supervisor.terminate(2, clock=10)
        supervisor.mass_step(controller, 11)
        supervisor.mass_step(controller, 12)
        assert controller.retired
        assert root.latches.from_child.value == 7
        assert root.state == CoreState.ENABLED
        assert root.resume_at == 12 + timing.mass_retire

    def test_for_child_reused(self, supervisor):
        """Test the FOR child is reused."""
        root = supervisor.root
        root.regs[2] = 2
        root.regs[1] = 0x100
        supervisor.preallocate(0, 1, clock=1)
        controller = supervisor.mass_begin(0, _qmass(MassMode.FOR), clock=3)
        assert root.latches.from_child.value == 2
        supervisor.mass_step(controller, 5)
        assert root.latches.from_child.value == 1
        child = supervisor.cores[1]
        child.regs[0] = 10
        supervisor.terminate(1, clock=8)
        assert root.regs[0] == 10
        assert child.state == CoreState.ALLOCATED
        supervisor.mass_step(controller, 9)
        assert child.state == CoreState.ENABLED
        assert child.latches.from_parent.value == 0x104
        child.regs[0] = 30
        supervisor.terminate(1, clock=12)
        supervisor.mass_step(controller, 13)
        assert controller.retired
        assert root.regs[0] == 30
        assert child.state == CoreState.CREATED
        assert root.preallocated == 0b10
        supervisor.check_invariants(13)


class TestInvariants:
    """Tests for the invariant checker."""

    def test_asymmetric_parent_link_detected(self, supervisor):
        """Test asymmetric parent link detected."""
        supervisor.allocate(0, 0x40, clock=1)
        supervisor.root.children = 0
        with pytest.raises(InvariantViolationError, match="does not list it"):
            supervisor.check_invariants(1)

    def test_lost_core_detected(self, supervisor):
        """Test lost core detected."""
        supervisor.pool &= ~0b1000
        with pytest.raises(InvariantViolationError, match="nowhere"):
            supervisor.check_invariants(1)

    def test_double_ownership_detected(self, supervisor):
        """Test double ownership detected."""
        supervisor.root.preallocated = 0b10
        with pytest.raises(InvariantViolationError, match="overlap"):
            supervisor.check_invariants(1)
