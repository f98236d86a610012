"""Half-duplex pairs: both directions of a link share one slot.

A :class:`Pair` induces the two antiparallel links between its nodes.
They never interfere with each other, but every other pair in the slot
interferes through both of its directions.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InfeasibleError, PreconditionError
from .geometry import Link, distance, euclidean_mst, link_distance
from .scheduler import Schedule, Slot, _select_mask, noise_scale
from .sinr import FEASIBILITY_RTOL, FeasibilityReport, SinrParams, f_matrix, gamma

__all__ = [
    "Pair",
    "gamma_bidi",
    "bidi_feasible",
    "bidi_f_sum",
    "bidi_assign_powers",
    "bidi_solve_powers",
    "bidi_connect",
    "symmetric_lb_instance",
    "symmetric_conflict_certificate",
    "pair_admissible",
    "SYMMETRIC_LB_MAX_N",
]

SYMMETRIC_LB_MAX_N = 8


@dataclass(frozen=True)
class Pair:
    n1: int
    n2: int
    a: tuple[float, float] = field(compare=False, repr=False)
    b: tuple[float, float] = field(compare=False, repr=False)

    def __post_init__(self):
        if self.n1 == self.n2:
            raise PreconditionError("a pair needs two distinct nodes")

    @classmethod
    def from_points(cls, points, i: int, j: int) -> "Pair":
        pts = np.asarray(points, dtype=np.float64)
        return cls(i, j, tuple(pts[i]), tuple(pts[j]))

    @property
    def links(self) -> tuple[Link, Link]:
        forward = Link(self.n1, self.n2, self.a, self.b)
        return forward, forward.reversed()

    @property
    def length(self) -> float:
        return distance(self.a, self.b)

    @property
    def key(self) -> tuple[float, int, int]:
        return (self.length, min(self.n1, self.n2), max(self.n1, self.n2))

    @property
    def nodes(self) -> tuple[int, int]:
        return (self.n1, self.n2)


def gamma_bidi(params: SinrParams) -> float:
    """Selection threshold for pairs: a quarter of the unidirectional one."""
    return gamma(params) / 4


def _check_pairs_disjoint(pairs: Sequence[Pair]) -> None:
    seen: set[int] = set()
    for pair in pairs:
        for node in pair.nodes:
            if node in seen:
                raise PreconditionError(f"point {node} appears in two pairs of the slot")
            seen.add(node)


def bidi_feasible(pairs: Sequence[Pair], powers, params: SinrParams) -> FeasibilityReport:
    """SINR check for both directions of every pair, twins excluded."""
    pairs = list(pairs)
    _check_pairs_disjoint(pairs)
    links = [l for pair in pairs for l in pair.links]
    if not links:
        return FeasibilityReport({}, {}, True, None)
    try:
        p = np.array([powers[l] for l in links], dtype=np.float64)
    except KeyError as exc:
        raise PreconditionError(f"no power for link {exc.args[0]}") from None
    owner = np.repeat(np.arange(len(pairs)), 2)
    a = params.alpha
    s = np.array([l.s for l in links])
    r = np.array([l.r for l in links])
    length = np.hypot(*(s - r).T)
    d = np.hypot(s[:, None, 0] - r[None, :, 0], s[:, None, 1] - r[None, :, 1])
    with np.errstate(divide="ignore"):
        received = p[:, None] / d**a
    received[owner[:, None] == owner[None, :]] = 0.0
    signal = p / length**a
    with np.errstate(divide="ignore"):
        sinr = signal / (received.sum(axis=0) + params.noise)
    ok = sinr >= params.beta * (1 - FEASIBILITY_RTOL)
    aff = np.minimum(1.0, params.beta * received / signal[None, :]).sum(axis=0)
    worst = int(np.argmin(sinr))
    return FeasibilityReport(
        sinr={l: float(v) for l, v in zip(links, sinr)},
        affectance_sum={l: float(v) for l, v in zip(links, aff)},
        passed=bool(ok.all()),
        worst=links[worst],
    )


def _pair_f_matrix(pairs: Sequence[Pair], alpha: float) -> np.ndarray:
    """``G[i, j]``: the 2x2 f-sum of pair ``i`` on pair ``j``; zero on the diagonal."""
    links = [l for pair in pairs for l in pair.links]
    f = f_matrix(links, alpha)
    m = len(pairs)
    g = f.reshape(m, 2, m, 2).sum(axis=(1, 3))
    np.fill_diagonal(g, 0.0)
    return g


def bidi_f_sum(pairs: Sequence[Pair], probe: Pair, alpha: float) -> float:
    """Summed f-scores that both directions of ``probe`` receive from the other pairs."""
    others = [p for p in pairs if p != probe]
    if not others:
        return 0.0
    g = _pair_f_matrix(others + [probe], alpha)
    return float(g[:-1, -1].sum())


def bidi_assign_powers(pairs: Sequence[Pair], params: SinrParams) -> dict[Link, float]:
    """Power recurrence over the 2m directed links, ignoring each link's twin."""
    flat = sorted(((l, i) for i, pair in enumerate(pairs) for l in pair.links), key=lambda t: t[0].key)
    if not flat:
        return {}
    links = [l for l, _ in flat]
    owner = np.array([i for _, i in flat])
    s = np.array([l.s for l in links])
    r = np.array([l.r for l in links])
    lengths = np.array([l.length for l in links])
    a, beta = params.alpha, params.beta
    m = len(links)
    p = np.zeros(m)
    p[-1] = 1.0
    for i in range(m - 2, -1, -1):
        later = np.arange(i + 1, m)
        later = later[owner[later] != owner[i]]
        if later.size == 0:
            p[i] = 1.0
            continue
        d = np.hypot(s[later, 0] - r[i, 0], s[later, 1] - r[i, 1])
        if np.any(d == 0):
            raise PreconditionError(f"pairs of the slot share point near link {links[i]}")
        total = 4 * beta * float(np.sum(p[later] * (lengths[i] / d) ** a))
        p[i] = total if total > 0 else 1.0
    p *= noise_scale(lengths, p, params)
    if not np.all(np.isfinite(p) & (p > 0)):
        raise InfeasibleError("power recurrence left the floating-point range")
    return {l: float(v) for l, v in zip(links, p)}


def bidi_solve_powers(pairs: Sequence[Pair], params: SinrParams) -> dict[Link, float] | None:
    """Smallest powers meeting every SINR constraint with margin, or None.

    Solves ``P = 2 beta (A P + N l**alpha) + 1`` where ``A[i, j]`` is the
    path-loss ratio from link ``j``'s sender to link ``i``'s receiver, twins
    excluded.  A positive solution exists exactly when the spectral radius
    of ``2 beta A`` is below 1.
    """
    links = [l for pair in pairs for l in pair.links]
    if not links:
        return {}
    owner = np.repeat(np.arange(len(pairs)), 2)
    s = np.array([l.s for l in links])
    r = np.array([l.r for l in links])
    length = np.array([l.length for l in links])
    d = np.hypot(s[None, :, 0] - r[:, None, 0], s[None, :, 1] - r[:, None, 1])
    with np.errstate(divide="ignore"):
        a = (length[:, None] / d) ** params.alpha
    a[owner[:, None] == owner[None, :]] = 0.0
    if not np.all(np.isfinite(a)):
        return None
    m = len(links)
    rhs = 2 * params.beta * params.noise * length**params.alpha + 1.0
    try:
        p = np.linalg.solve(np.eye(m) - 2 * params.beta * a, rhs)
    except np.linalg.LinAlgError:
        return None
    if not np.all(np.isfinite(p) & (p > 0)):
        return None
    return {l: float(v) for l, v in zip(links, p)}


def _feasible_powers(pairs: list[Pair], params: SinrParams) -> dict[Link, float] | None:
    powers = bidi_assign_powers(pairs, params)
    if bidi_feasible(pairs, powers, params).passed:
        return powers
    powers = bidi_solve_powers(pairs, params)
    if powers is not None and bidi_feasible(pairs, powers, params).passed:
        return powers
    return None


def bidi_connect(points, params: SinrParams, gamma_value: float | None = None, rule: str = "admitted") -> Schedule:
    """Schedule every MST edge as a pair, both directions in the same slot.

    Each round selects pairs by their f-sums and tries the flattened power
    recurrence.  Pairs are not covered by the one-slot guarantee for single
    links: a pair's sender can sit on the receiver of another pair's long
    reverse link.  When the recurrence fails, the slot falls back to the
    linear-system powers of :func:`bidi_solve_powers`, and if those fail too
    the longest selected pair returns to the remainder.
    """
    pts = np.asarray(points, dtype=np.float64)
    if len(pts) < 2:
        raise PreconditionError("need at least two points")
    g = gamma_bidi(params) if gamma_value is None else gamma_value
    tree = euclidean_mst(pts)
    pairs = sorted((Pair.from_points(pts, i, j) for i, j in tree.edges), key=lambda p: p.key)
    if any(p.length <= 0 for p in pairs):
        raise PreconditionError("zero-length pair (duplicate points)")
    fp = _pair_f_matrix(pairs, params.alpha)
    # only shorter pairs count toward a pair's score
    fp = np.triu(fp, k=1)
    remaining = np.arange(len(pairs))
    slots = []
    while remaining.size:
        keep = _select_mask(fp[np.ix_(remaining, remaining)], g, rule)
        if not keep.any():
            raise InfeasibleError("no pair could be selected from a nonempty remainder")
        picked = list(remaining[keep])
        while True:
            chosen = [pairs[i] for i in picked]
            powers = _feasible_powers(chosen, params)
            if powers is not None:
                break
            if len(picked) == 1:
                raise InfeasibleError(f"pair {chosen[0]} cannot be scheduled on its own")
            # pairs are in increasing length order, so this drops the longest
            keep[np.flatnonzero(remaining == picked.pop())] = False
        slots.append(Slot(chosen, powers))
        remaining = remaining[~keep]
    return Schedule(slots, "bidi-mst")


def symmetric_lb_instance(n: int) -> np.ndarray:
    """Points ``0, 1, 2, 8, 128, ...`` on a line: each is twice the square of the previous."""
    if n < 2:
        raise PreconditionError("n must be at least 2")
    if n > SYMMETRIC_LB_MAX_N:
        raise PreconditionError(f"n > {SYMMETRIC_LB_MAX_N}: coordinates grow doubly exponentially")
    xs = [0.0, 1.0]
    while len(xs) < n:
        xs.append(2.0 * xs[-1] ** 2)
    return np.column_stack([np.array(xs), np.zeros(n)])


def symmetric_conflict_certificate(first: Pair, second: Pair, alpha: float) -> float:
    """Largest power-free product of two cross affectances between the pairs.

    A value above 1 means one of the two affectances exceeds 1 for every
    symmetric choice of powers, so the pairs can never share a slot.
    """
    if first == second:
        raise PreconditionError("certificate needs two different pairs")
    best = 0.0
    for la, lb, lc, ld in itertools.product(first.links, second.links, second.links, first.links):
        d1 = link_distance(la, lb)
        d2 = link_distance(lc, ld)
        if d1 == 0 or d2 == 0:
            return float("inf")
        best = max(best, (ld.length * lb.length / (d2 * d1)) ** alpha)
    return best


def pair_admissible(pairs: Sequence[Pair], params: SinrParams, power_mode, gamma_value: float | None = None) -> bool:
    """Whether ``pairs`` fit in one slot under the given power mode."""
    try:
        _check_pairs_disjoint(pairs)
    except PreconditionError:
        return False
    if power_mode == "gamma":
        g = gamma_bidi(params) if gamma_value is None else gamma_value
        return bool(np.all(_pair_f_matrix(pairs, params.alpha).sum(axis=0) <= g))
    if power_mode == "recurrence":
        try:
            powers = bidi_assign_powers(pairs, params)
        except PreconditionError:
            return False
    else:
        links = [l for pair in pairs for l in pair.links]
        lengths = np.array([l.length for l in links])
        raw = np.array([power_mode(x) for x in lengths], dtype=np.float64)
        raw *= noise_scale(lengths, raw, params)
        powers = dict(zip(links, raw))
    return bidi_feasible(pairs, powers, params).passed
