"""Greedy one-slot selection with explicit powers, and the Connect loop.

One slot is built in two passes over the links sorted by length: a link
is admitted when the f-scores it receives from all shorter links of the
input stay below ``gamma``, then powers are assigned from the longest
admitted link down so that each link out-shouts the longer ones.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from . import _partition
from .errors import InfeasibleError, PreconditionError
from .geometry import Link, euclidean_mst, link_distance, orient
from .sinr import (
    SinrParams,
    check_node_disjoint,
    f_matrix,
    gamma,
    is_feasible,
    link_arrays,
)

__all__ = [
    "Slot",
    "Schedule",
    "sort_links",
    "schedule_select",
    "assign_powers",
    "noise_scale",
    "schedule_one_slot",
    "connect",
    "strong_connect",
    "sparsify",
    "min_slots_bruteforce",
    "BRUTEFORCE_MAX_LINKS",
    "SELECTION_RULES",
]

BRUTEFORCE_MAX_LINKS = 10


@dataclass
class Slot:
    links: list
    powers: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.links)


@dataclass
class Schedule:
    slots: list[Slot]
    source: str = ""

    def __len__(self) -> int:
        return len(self.slots)

    def links(self) -> list:
        return [l for slot in self.slots for l in slot.links]


def sort_links(links: Sequence[Link]) -> list[Link]:
    out = sorted(links, key=lambda l: l.key)
    for a, b in zip(out, out[1:]):
        if a == b:
            raise PreconditionError(f"duplicate link {a}")
    for l in out:
        if l.length <= 0:
            raise PreconditionError(f"zero-length link {l}")
    return out


SELECTION_RULES = ("admitted", "all")


def _select_mask(f: np.ndarray, gamma_value: float, rule: str = "admitted") -> np.ndarray:
    # f is indexed in sorted order: row i only scores links after i
    if rule == "all":
        return f.sum(axis=0) <= gamma_value
    if rule != "admitted":
        raise PreconditionError(f"selection rule must be one of {SELECTION_RULES}, got {rule!r}")
    m = f.shape[0]
    keep = np.zeros(m, dtype=bool)
    scores = np.zeros(m)
    for j in range(m):
        if scores[j] <= gamma_value:
            keep[j] = True
            scores += f[j]
    return keep


def schedule_select(links: Sequence[Link], gamma_value: float, alpha: float, rule: str = "admitted") -> list[Link]:
    """Greedy pass over ``links`` in increasing length order.

    With ``rule="admitted"`` a link joins when the f-scores it receives
    from the shorter links admitted so far total at most ``gamma_value``;
    ``rule="all"`` sums over every shorter input link instead, which is
    stricter.  Either way the result meets the gamma condition.
    """
    if gamma_value <= 0:
        raise PreconditionError("gamma must be positive")
    order = sort_links(links)
    mask = _select_mask(f_matrix(order, alpha), gamma_value, rule)
    return [l for l, keep in zip(order, mask) if keep]


def noise_scale(lengths: np.ndarray, powers: np.ndarray, params: SinrParams) -> float:
    """Common factor so that noise alone leaves an SINR of at least ``2 beta``."""
    if params.noise == 0 or len(powers) == 0:
        return 1.0
    need = 2 * params.beta * params.noise * lengths**params.alpha / powers
    return max(1.0, float(need.max()))


def assign_powers(links: Sequence[Link], params: SinrParams) -> dict[Link, float]:
    """Backward power recurrence over the links sorted by length, then noise scaling.

    The longest link gets power 1; each shorter link gets ``4 beta`` times
    the interference that all longer links would cause at its receiver,
    measured relative to its own path loss.
    """
    order = sort_links(links)
    m = len(order)
    if m == 0:
        return {}
    s, r, lengths = link_arrays(order)
    a, beta = params.alpha, params.beta
    p = np.zeros(m)
    p[-1] = 1.0
    for i in range(m - 2, -1, -1):
        d = np.hypot(s[i + 1 :, 0] - r[i, 0], s[i + 1 :, 1] - r[i, 1])
        if np.any(d == 0):
            raise PreconditionError(f"link {order[i]} shares its receiver with a longer link's sender")
        total = 4 * beta * float(np.sum(p[i + 1 :] * (lengths[i] / d) ** a))
        p[i] = total if total > 0 else 1.0
    p *= noise_scale(lengths, p, params)
    if not np.all(np.isfinite(p) & (p > 0)):
        raise InfeasibleError("power recurrence left the floating-point range")
    return {l: float(v) for l, v in zip(order, p)}


def schedule_one_slot(
    links: Sequence[Link], params: SinrParams, gamma_value: float | None = None, rule: str = "admitted"
) -> tuple[Slot, list[Link]]:
    g = gamma(params) if gamma_value is None else gamma_value
    if not links:
        return Slot([], {}), []
    chosen = schedule_select(links, g, params.alpha, rule)
    powers = assign_powers(chosen, params)
    taken = set(chosen)
    remainder = [l for l in links if l not in taken]
    return Slot(chosen, powers), remainder


def connect(
    links: Sequence[Link],
    params: SinrParams,
    gamma_value: float | None = None,
    source: str = "connect",
    verify: bool = True,
    rule: str = "admitted",
) -> Schedule:
    """Repeatedly peel off one slot until every link is scheduled.

    Equivalent to calling :func:`schedule_one_slot` on the shrinking
    remainder, but the f-matrix is computed once up front.
    """
    g = gamma(params) if gamma_value is None else gamma_value
    if g <= 0:
        raise PreconditionError("gamma must be positive")
    order = sort_links(links)
    f = f_matrix(order, params.alpha)
    remaining = np.arange(len(order))
    slots = []
    while remaining.size:
        keep = _select_mask(f[np.ix_(remaining, remaining)], g, rule)
        if not keep.any():
            raise InfeasibleError("no link could be selected from a nonempty remainder")
        chosen = [order[i] for i in remaining[keep]]
        slot = Slot(chosen, assign_powers(chosen, params))
        if verify:
            report = is_feasible(slot.links, slot.powers, params)
            if not report.passed:
                raise InfeasibleError(f"slot {len(slots)} failed verification at {report.worst}")
        slots.append(slot)
        remaining = remaining[~keep]
    return Schedule(slots, source)


def strong_connect(points, params: SinrParams, root: int = 0, gamma_value: float | None = None) -> tuple[Schedule, Schedule]:
    """Schedule the MST oriented toward ``root`` and, separately, away from it."""
    pts = np.asarray(points, dtype=np.float64)
    if len(pts) < 2:
        raise PreconditionError("strong connectivity needs at least two points")
    tree = euclidean_mst(pts)
    toward = orient(tree, root, "toward")
    away = orient(tree, root, "away")
    return (
        connect(toward, params, gamma_value, source=f"mst-toward-{root}"),
        connect(away, params, gamma_value, source=f"mst-away-{root}"),
    )


def sparsify(links: Sequence[Link], gamma_value: float, alpha: float) -> list[list[Link]]:
    """First-fit the links, shortest first, into bins that each meet the gamma condition."""
    order = sort_links(links)
    f = f_matrix(order, alpha)
    bins: list[list[int]] = []
    for j in range(len(order)):
        for members in bins:
            if f[members, j].sum() <= gamma_value:
                members.append(j)
                break
        else:
            bins.append([j])
    return [[order[i] for i in members] for members in bins]


def _oblivious_powers(links: Sequence[Link], p: Callable[[float], float], params: SinrParams) -> dict[Link, float]:
    lengths = np.array([l.length for l in links])
    powers = np.array([p(x) for x in lengths], dtype=np.float64)
    powers *= noise_scale(lengths, powers, params)
    return {l: float(v) for l, v in zip(links, powers)}


def min_slots_bruteforce(units: Sequence, params: SinrParams, power_mode="recurrence", gamma_value: float | None = None) -> int:
    """Fewest slots for ``units`` found by exhaustive search over set partitions.

    ``power_mode`` decides when a block counts as one slot:

    * ``"recurrence"`` -- the power recurrence makes the block feasible;
    * ``"gamma"`` -- the block meets the gamma condition;
    * a callable ``p(length)`` -- oblivious powers make the block feasible.

    ``units`` may be links or bidirectional pairs.
    """
    if not (power_mode in ("recurrence", "gamma") or callable(power_mode)):
        raise PreconditionError(f"unknown power mode {power_mode!r}")
    units = list(units)
    m = len(units)
    if m > BRUTEFORCE_MAX_LINKS:
        raise PreconditionError(f"brute force is limited to {BRUTEFORCE_MAX_LINKS} links, got {m}")
    if m == 0:
        return 0
    from .bidirectional import Pair, pair_admissible

    if isinstance(units[0], Pair):
        table = _partition.admissible_table(
            m, lambda idx: pair_admissible([units[i] for i in idx], params, power_mode, gamma_value)
        )
    elif power_mode == "gamma":
        g = gamma(params) if gamma_value is None else gamma_value
        table = _partition.gamma_admissible_table(f_matrix(units, params.alpha), g)
    else:
        table = _partition.admissible_table(m, lambda idx: _link_block_ok([units[i] for i in idx], params, power_mode))
    result = _partition.min_partition(table, m)
    if math.isinf(result):
        raise InfeasibleError("some link cannot be scheduled even on its own")
    return int(result)


def _log_oblivious_ok(block: list[Link], p, params: SinrParams) -> bool:
    """Noise-free oblivious feasibility with every quantity kept as a logarithm."""
    from .oblivious import log_power

    a = params.alpha
    for tgt in block:
        terms = []
        for src in block:
            if src is tgt:
                continue
            d = link_distance(src, tgt)
            if d == 0:
                return False
            terms.append(log_power(p, src.length) - a * math.log(d))
        if terms:
            signal = log_power(p, tgt.length) - a * math.log(tgt.length)
            if signal - np.logaddexp.reduce(terms) < math.log(params.beta) - 1e-9:
                return False
    return True


def _link_block_ok(block: list[Link], params: SinrParams, power_mode) -> bool:
    try:
        check_node_disjoint(block)
        if callable(power_mode) and params.noise == 0 and getattr(power_mode, "exponent", None) is not None:
            return _log_oblivious_ok(block, power_mode, params)
        if power_mode == "recurrence":
            powers: Mapping[Link, float] = assign_powers(block, params)
        else:
            powers = _oblivious_powers(block, power_mode, params)
    except PreconditionError:
        return False
    return is_feasible(block, powers, params).passed
