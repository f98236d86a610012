"""Oblivious (length-only) power assignments.

Covers the smoothness test for power functions, the point chain on which
every smooth assignment needs one slot per link, length classes, and the
per-class colouring scheduler for uniform and linear power.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InfeasibleError, PreconditionError
from .geometry import Link, link_distance
from .scheduler import Schedule, Slot, noise_scale
from .sinr import SinrParams, check_node_disjoint, is_feasible

__all__ = [
    "PowerFunction",
    "LengthClasses",
    "smooth_g",
    "is_smooth",
    "g_inverse",
    "oblivious_lb_instance",
    "pairwise_oblivious_conflict",
    "length_classes",
    "riemann_zeta",
    "log_power",
    "separation_factor",
    "color_bound",
    "uniform_power_schedule",
    "linear_power_schedule",
]

KINDS = ("uniform", "linear", "mean", "exponent")


@dataclass(frozen=True)
class PowerFunction:
    """``p(x)`` for a link of length ``x``.

    uniform: 1, linear: ``x**alpha``, mean: ``x**(alpha/2)``,
    exponent: ``x**tau``.
    """

    kind: str
    alpha: float
    tau: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PreconditionError(f"unknown power function kind {self.kind!r}")
        if self.kind == "exponent" and self.tau is None:
            raise PreconditionError("exponent power function needs tau")

    @property
    def exponent(self) -> float:
        return {
            "uniform": 0.0,
            "linear": self.alpha,
            "mean": self.alpha / 2,
            "exponent": self.tau,
        }[self.kind]

    def __call__(self, x):
        return np.power(np.asarray(x, dtype=np.float64), self.exponent)

    def label(self) -> str:
        return f"exponent({self.tau})" if self.kind == "exponent" else self.kind


def smooth_g(p: PowerFunction, x):
    """``g(x) = min(p(x), x**alpha / p(x)) / 2``."""
    x = np.asarray(x, dtype=np.float64)
    # every supported family is a power law, so the minimum has a closed form
    return 0.5 * x ** min(p.exponent, p.alpha - p.exponent)


def is_smooth(p: PowerFunction, grid: np.ndarray | None = None) -> bool:
    """Check smoothness on a sample grid of lengths ``>= 1``.

    Requires ``x <= p(x) <= x**alpha``, ``p`` nondecreasing, and ``g``
    strictly increasing with at least a hundredfold growth over the grid.
    """
    if grid is None:
        grid = np.logspace(0, 8, 400)
    px = p(grid)
    g = smooth_g(p, grid)
    return bool(
        np.all(px >= grid * (1 - 1e-12))
        and np.all(px <= grid**p.alpha * (1 + 1e-12))
        and np.all(np.diff(px) >= 0)
        and np.all(np.diff(g) > 0)
        and g[-1] > 100 * g[0]
    )


def g_inverse(p: PowerFunction, y: float, tol: float = 1e-12, closed_form: bool = True) -> float:
    """Solve ``g(x) = y`` for ``x >= 1``.

    Uses the closed form for power laws unless ``closed_form`` is false,
    in which case it bisects.
    """
    if not is_smooth(p):
        raise PreconditionError(f"{p.label()} power is not smooth; g has no inverse")
    g1 = float(smooth_g(p, 1.0))
    if y < g1:
        raise PreconditionError(f"y={y} is below g(1)={g1}")
    if closed_form:
        e = min(p.exponent, p.alpha - p.exponent)
        return float((2.0 * y) ** (1.0 / e))
    lo, hi = 1.0, 2.0
    while smooth_g(p, hi) < y:
        lo, hi = hi, hi * 2.0
        if not math.isfinite(hi):
            raise PreconditionError("g_inverse bracket overflowed")
    while hi - lo > tol * hi:
        mid = 0.5 * (lo + hi)
        if smooth_g(p, mid) < y:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def oblivious_lb_instance(n: int, p: PowerFunction) -> np.ndarray:
    """Points on a line that force every smooth power ``p`` into one link per slot.

    ``x1 = 0``, ``x2 = 2`` and ``x_i = x_{i-1} + g^{-1}(2 x_{i-1}**alpha)``.
    """
    if n < 2:
        raise PreconditionError("n must be at least 2")
    xs = [0.0, 2.0]
    while len(xs) < n:
        prev = xs[-1]
        try:
            target = 2.0 * prev**p.alpha
        except OverflowError:
            target = math.inf
        if not math.isfinite(target):
            raise PreconditionError(f"coordinates overflow after {len(xs)} points")
        nxt = prev + g_inverse(p, target)
        if not math.isfinite(nxt):
            raise PreconditionError(f"coordinates overflow after {len(xs)} points")
        xs.append(nxt)
    return np.column_stack([np.array(xs), np.zeros(n)])


def pairwise_oblivious_conflict(first: Link, second: Link, p: PowerFunction, params: SinrParams) -> bool:
    """True if the two links cannot share a slot under powers ``p(length)``.

    Links that share a point always conflict.  Otherwise the test is
    whether either uncapped affectance (noise ignored) exceeds 1.
    """
    if first == second:
        raise PreconditionError("a link does not conflict with itself")
    if {first.sender, first.receiver} & {second.sender, second.receiver}:
        return True
    a = params.alpha
    # compare in logs: lower-bound chains push p(length) past the double range
    lp1, lp2 = log_power(p, first.length), log_power(p, second.length)

    def log_raw(src: Link, lsrc: float, tgt: Link, ltgt: float) -> float:
        d = link_distance(src, tgt)
        if d == 0:
            return math.inf
        return math.log(params.beta) + lsrc - a * math.log(d) - ltgt + a * math.log(tgt.length)

    return log_raw(first, lp1, second, lp2) > 0 or log_raw(second, lp2, first, lp1) > 0


def log_power(p, length: float) -> float:
    """``log p(length)``, exact for power laws and via ``p`` otherwise."""
    e = getattr(p, "exponent", None)
    if e is not None:
        return e * math.log(length)
    return math.log(float(p(length)))


@dataclass
class LengthClasses:
    classes: dict[int, list[Link]]
    scale: float

    @property
    def diversity(self) -> int:
        return len(self.classes)


def length_classes(links: Sequence[Link]) -> LengthClasses:
    """Group links by ``ceil(log2(length / min length))``."""
    if not links:
        return LengthClasses({}, 1.0)
    shortest = min(l.length for l in links)
    if shortest <= 0:
        raise PreconditionError("zero-length link")
    classes: dict[int, list[Link]] = {}
    for link in links:
        m = math.ceil(math.log2(link.length / shortest))
        classes.setdefault(m, []).append(link)
    return LengthClasses(dict(sorted(classes.items())), shortest)


def riemann_zeta(s: float, tol: float = 1e-10) -> float:
    """Riemann zeta for real ``s > 1``: partial sum plus Euler-Maclaurin tail."""
    if s <= 1:
        raise PreconditionError("zeta series diverges for s <= 1")
    n = 10
    while True:
        k = np.arange(1, n + 1, dtype=np.float64)
        head = float(np.sum(k**-s))
        tail = n ** (1 - s) / (s - 1) - 0.5 * n**-s + s * n ** (-s - 1) / 12
        # next Euler-Maclaurin term bounds the error
        err = s * (s + 1) * (s + 2) * n ** (-s - 3) / 720
        if err < tol:
            return head + tail
        n *= 2


def separation_factor(alpha: float) -> float:
    """Sender separation ``t`` (in units of the class's shortest length)."""
    return 4.0 * (alpha * 16.0 * riemann_zeta(alpha - 1.0)) ** (1.0 / alpha)


def color_bound(alpha: float) -> float:
    """``C = 8 (4 t)**2`` colours suffice per length class."""
    return 8.0 * (4.0 * separation_factor(alpha)) ** 2


def _class_powers(links: list[Link], params: SinrParams, mode: str) -> dict[Link, float]:
    lengths = np.array([l.length for l in links])
    if mode == "uniform":
        level = 1.0 if params.noise == 0 else 2 * params.beta * params.noise * (2 * lengths.max()) ** params.alpha
        return {l: level for l in links}
    powers = lengths**params.alpha
    powers = powers * noise_scale(lengths, powers, params)
    return {l: float(v) for l, v in zip(links, powers)}


def _oblivious_schedule(links: Sequence[Link], params: SinrParams, mode: str) -> Schedule:
    links = list(links)
    if any(l.length <= 0 for l in links):
        raise PreconditionError("zero-length link")
    t = separation_factor(params.alpha)
    bound = color_bound(params.alpha)
    slots = []
    for m, members in length_classes(links).classes.items():
        d = min(l.length for l in members)
        order = sorted(members, key=lambda l: (-l.length, l.sender, l.receiver))
        colors: list[list[Link]] = []
        senders: list[list[tuple[float, float]]] = []
        for link in order:
            for group, pts in zip(colors, senders):
                arr = np.asarray(pts)
                if np.all(np.hypot(arr[:, 0] - link.s[0], arr[:, 1] - link.s[1]) >= t * d):
                    group.append(link)
                    pts.append(link.s)
                    break
            else:
                colors.append([link])
                senders.append([link.s])
        if len(colors) > bound:
            warnings.warn(f"length class {m} needed {len(colors)} colours, more than the bound {bound:.0f}")
        for group in colors:
            check_node_disjoint(group)
            powers = _class_powers(group, params, mode)
            report = is_feasible(group, powers, params)
            if not report.passed:
                raise InfeasibleError(f"{mode}-power colour class {m} is infeasible at {report.worst}")
            slots.append(Slot(group, powers))
    return Schedule(slots, f"{mode}-power")


def uniform_power_schedule(links: Sequence[Link], params: SinrParams) -> Schedule:
    """One slot per colour per length class, all links at a common power."""
    return _oblivious_schedule(links, params, "uniform")


def linear_power_schedule(links: Sequence[Link], params: SinrParams) -> Schedule:
    """As :func:`uniform_power_schedule` with power ``length**alpha`` per link."""
    return _oblivious_schedule(links, params, "linear")
