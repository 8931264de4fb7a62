"""Run trace recording, output and audits."""

import logging
from collections import Counter
from typing import IO, Iterable, List, Optional

from .models import TraceEvent, TraceEventKind, TransferRoute

logger = logging.getLogger(__name__)

# Detail prefixes shared between the supervisor and the audits.
PICKUP_FOR_PARENT = "for_parent"
DELIVER_FOR_PARENT = "from_child<-for_parent"


class TraceRecorder:
    """Collects trace events in the order they happen."""

    def __init__(self, enabled: bool = True):
        """
        Initialize an empty trace.

        Args:
            enabled: When False events are counted but not stored
        """
        self.enabled = enabled
        self.events: List[TraceEvent] = []
        self.last_clock = 0

    def record(
        self,
        clock: int,
        kind: TraceEventKind,
        core: Optional[int] = None,
        detail: str = "",
        route: Optional[TransferRoute] = None,
        value: Optional[int] = None,
    ) -> None:
        """Append one event stamped with ``clock``."""
        self.last_clock = max(self.last_clock, clock)
        if self.enabled:
            self.events.append(TraceEvent(
                clock=clock, core=core, kind=kind, detail=detail, route=route, value=value,
            ))

    def transfer(self, clock: int, core: int, route: TransferRoute, detail: str, value: int) -> None:
        """Record a data movement between a core and the supervisor."""
        self.record(clock, TraceEventKind.TRANSFER, core=core, detail=f"{detail} {value:#x}", route=route, value=value)

    def events_at(self, clock: int) -> List[TraceEvent]:
        """Events stamped with ``clock``."""
        return [event for event in self.events if event.clock == clock]


def write_trace(events: Iterable[TraceEvent], stream: IO[str]) -> int:
    """
    Write events one per line.

    Args:
        events: Events to write
        stream: Open text stream

    Returns:
        int: Number of lines written
    """
    count = 0
    for event in events:
        stream.write(event.to_line() + "\n")
        count += 1
    logger.debug(f"Wrote {count} trace lines")
    return count


def audit_star_topology(events: Iterable[TraceEvent]) -> List[str]:
    """Every data movement must run between one core and the supervisor."""
    problems = []
    for event in events:
        if event.kind != TraceEventKind.TRANSFER:
            continue
        if event.route not in (TransferRoute.CORE_TO_SV, TransferRoute.SV_TO_CORE) or event.core is None:
            problems.append(f"clock {event.clock}: transfer without a core/supervisor endpoint: {event.detail}")
    return problems


def audit_operation_rate(events: Iterable[TraceEvent]) -> List[str]:
    """At most one queued supervisor operation may be applied per clock."""
    per_clock = Counter(event.clock for event in events if event.kind == TraceEventKind.OPERATION)
    return [f"clock {clock}: {count} supervisor operations" for clock, count in sorted(per_clock.items()) if count > 1]


def audit_fifo(events: Iterable[TraceEvent]) -> List[str]:
    """First applications of queued operations follow the order they were raised."""
    raised: List[int] = []
    served: List[int] = []
    for event in events:
        if event.kind == TraceEventKind.META and event.value is not None:
            raised.append(event.value)
        elif event.kind == TraceEventKind.OPERATION and event.value is not None and "retry" not in event.detail:
            served.append(event.value)
    if served != raised[:len(served)]:
        return [f"service order {served} differs from raise order {raised[:len(served)]}"]
    return []


def audit_no_lost_updates(events: Iterable[TraceEvent]) -> List[str]:
    """Every value a child writes for its parent is delivered exactly once."""
    picked = Counter()
    delivered = Counter()
    for event in events:
        if event.route == TransferRoute.CORE_TO_SV and event.detail.startswith(PICKUP_FOR_PARENT):
            picked[event.value] += 1
        elif event.route == TransferRoute.SV_TO_CORE and event.detail.startswith(DELIVER_FOR_PARENT):
            delivered[event.value] += 1
        elif event.kind in (TraceEventKind.MASS_ACCUMULATE, TraceEventKind.MASS_BREAK):
            delivered[event.value] += 1
    if picked != delivered:
        missing = picked - delivered
        extra = delivered - picked
        return [f"lost values {dict(missing)}, unexpected deliveries {dict(extra)}"]
    return []
