"""Minimum-latency aggregation scheduling.

Each round links every surviving point to its nearest surviving
neighbour, schedules one slot out of that forest, and retires the
senders.  The last survivor is the sink; the union of all slots is an
in-arborescence in which every link fires after everything below it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InfeasibleError, PreconditionError
from .geometry import Link, as_points, nearest_neighbor_forest
from .scheduler import Slot, schedule_one_slot
from .sinr import SinrParams, is_feasible

__all__ = ["AggregationSchedule", "AggregationReport", "mlas", "verify_aggregation", "enforce_matching", "latency_lower_bound"]


@dataclass
class AggregationSchedule:
    slots: list[Slot]
    sink: int | None
    n: int
    active_sizes: list[int] = field(default_factory=list)

    @property
    def latency(self) -> int:
        return len(self.slots)

    @property
    def tree(self) -> list[Link]:
        return [l for slot in self.slots for l in slot.links]


def enforce_matching(links: list[Link]) -> list[Link]:
    """Drop links that touch an already used point, shortest links first."""
    used: set[int] = set()
    kept = []
    for link in sorted(links, key=lambda l: l.key):
        if link.sender in used or link.receiver in used:
            continue
        used.update((link.sender, link.receiver))
        kept.append(link)
    return kept


def mlas(points, params: SinrParams, gamma_value: float | None = None) -> AggregationSchedule:
    pts = as_points(points)
    n = len(pts)
    if n == 0:
        raise PreconditionError("aggregation needs at least one point")
    active = np.arange(n)
    slots: list[Slot] = []
    sizes = [n]
    while len(active) > 1:
        forest = nearest_neighbor_forest(pts[active], ids=active)
        slot, _ = schedule_one_slot(forest, params, gamma_value)
        kept = enforce_matching(slot.links)
        if not kept:
            raise InfeasibleError(f"round {len(slots)} scheduled nothing from {len(active)} points")
        slots.append(Slot(kept, {l: slot.powers[l] for l in kept}))
        senders = {l.sender for l in kept}
        active = np.array([p for p in active if p not in senders])
        sizes.append(len(active))
    return AggregationSchedule(slots, int(active[0]), n, sizes)


@dataclass
class AggregationReport:
    feasible: bool
    arborescence: bool
    ordering: bool
    shrink_ratios: list[float]
    problems: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.feasible and self.arborescence and self.ordering

    @property
    def max_shrink(self) -> float:
        return max(self.shrink_ratios, default=0.0)


def verify_aggregation(schedule: AggregationSchedule, params: SinrParams) -> AggregationReport:
    """Check feasibility, the arborescence shape and the ordering requirement."""
    problems = []
    feasible = True
    for i, slot in enumerate(schedule.slots):
        try:
            ok = is_feasible(slot.links, slot.powers, params).passed
        except PreconditionError as exc:
            ok = False
            problems.append(f"slot {i}: {exc}")
        if not ok:
            feasible = False
            problems.append(f"slot {i} is not SINR-feasible")

    out_link: dict[int, Link] = {}
    when: dict[Link, int] = {}
    arborescence = True
    for i, slot in enumerate(schedule.slots):
        for link in slot.links:
            if link.sender in out_link:
                arborescence = False
                problems.append(f"point {link.sender} sends twice")
            out_link[link.sender] = link
            when[link] = i
    nodes = set(range(schedule.n))
    roots = nodes - set(out_link)
    if len(roots) != 1:
        arborescence = False
        problems.append(f"expected one root, found {sorted(roots)}")
    for start in out_link:
        # follow parent pointers; a cycle or a dangling pointer breaks the tree
        seen = set()
        node = start
        while node in out_link:
            if node in seen:
                arborescence = False
                problems.append(f"cycle through point {node}")
                break
            seen.add(node)
            node = out_link[node].receiver
        if node not in nodes:
            arborescence = False
            problems.append(f"link leaves the point set at {node}")

    ordering = True
    for link, i in when.items():
        parent = out_link.get(link.receiver)
        if parent is not None and when[parent] <= i:
            ordering = False
            problems.append(f"{link} (slot {i}) is not before its parent {parent} (slot {when[parent]})")

    sizes = [schedule.n]
    for slot in schedule.slots:
        sizes.append(sizes[-1] - len({l.sender for l in slot.links}))
    ratios = [b / a for a, b in zip(sizes, sizes[1:]) if a > 0]
    return AggregationReport(feasible, arborescence, ordering, ratios, problems)


def latency_lower_bound(n: int) -> int:
    return math.ceil(math.log2(n)) if n > 1 else 0
