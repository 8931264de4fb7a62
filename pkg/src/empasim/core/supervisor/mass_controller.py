"""State of one FOR or SUMUP mass-processing controller."""

from collections import deque
from typing import Deque, Optional

from ..isa import MassMode
from ..isa.instructions import WORD_MASK


class MassController:
    """
    Drives the iterations of one QMass on behalf of a stalled parent.

    FOR re-uses a single child serially and mirrors the remaining count in
    the parent's from_child latch; SUMUP launches overlapping children and
    adds their summands into ``accumulator``.
    """

    def __init__(
        self,
        mode: MassMode,
        parent: int,
        remaining: int,
        current_address: int,
        stride: int,
        body: int,
        ready_at: int,
    ):
        self.mode = mode
        self.parent = parent
        self.remaining = remaining
        self.current_address = current_address & WORD_MASK
        self.stride = stride
        self.body = body
        self.accumulator = 0
        self.active_children = 0
        self.break_requested = False
        self.pending: Deque[int] = deque()

        self.launched = 0
        self.child: Optional[int] = None  # FOR only: the re-used child
        self.launch_ready_at = ready_at
        self.accumulate_ready_at = ready_at
        self.stalled = False
        self.retired = False

    def __repr__(self) -> str:
        return (
            f"MassController({self.mode.value}, parent={self.parent}, remaining={self.remaining}, "
            f"address=0x{self.current_address:x}, active={self.active_children:#x})"
        )

    @property
    def launching(self) -> bool:
        """True while iterations are left to start."""
        return self.remaining > 0 and not self.break_requested

    @property
    def drained(self) -> bool:
        """True once no launch, child or summand is outstanding."""
        return not self.launching and self.active_children == 0 and not self.pending

    def advance(self) -> int:
        """Consume one iteration; returns the address handed to its child."""
        address = self.current_address
        self.remaining -= 1
        self.launched += 1
        self.current_address = (address + self.stride) & WORD_MASK
        return address
