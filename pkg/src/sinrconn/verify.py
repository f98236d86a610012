"""Verification of saved schedules, kept apart from the schedulers.

Nothing here calls a scheduler: slot feasibility goes through the direct
SINR computation and connectivity through the graph verifiers.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .bidirectional import Pair, bidi_feasible
from .errors import PreconditionError
from .geometry import Link
from .scheduler import Schedule
from .sinr import SinrParams, is_feasible

__all__ = ["ScheduleReport", "verify_schedule", "directed_links"]


@dataclass
class ScheduleReport:
    slots: int
    failed_slots: list[int] = field(default_factory=list)
    min_margin: float = float("inf")
    problems: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.problems


def directed_links(schedule: Schedule) -> list[Link]:
    """All directed links of a schedule; a pair contributes both directions."""
    out = []
    for unit in schedule.links():
        out.extend(unit.links if isinstance(unit, Pair) else (unit,))
    return out


def verify_schedule(schedule: Schedule, params: SinrParams, expected: Iterable[Link] | None = None) -> ScheduleReport:
    """Check every slot against the SINR condition with its own powers.

    Also flags links scheduled more than once and, when ``expected`` is
    given, links that never appear.
    """
    report = ScheduleReport(len(schedule))
    for i, slot in enumerate(schedule.slots):
        try:
            if slot.links and isinstance(slot.links[0], Pair):
                res = bidi_feasible(slot.links, slot.powers, params)
            else:
                res = is_feasible(slot.links, slot.powers, params)
        except PreconditionError as exc:
            report.failed_slots.append(i)
            report.problems.append(f"slot {i}: {exc}")
            continue
        report.min_margin = min(report.min_margin, res.min_margin(params.beta))
        if not res.passed:
            report.failed_slots.append(i)
            report.problems.append(f"slot {i}: SINR below beta at {res.worst}")
    seen: set = set()
    for link in directed_links(schedule):
        if link in seen:
            report.problems.append(f"{link} is scheduled more than once")
        seen.add(link)
    if expected is not None:
        missing = set(expected) - seen
        if missing:
            report.problems.append(f"{len(missing)} expected links never scheduled")
    return report
