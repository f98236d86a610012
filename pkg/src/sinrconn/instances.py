"""Instance generators, the recursive line gadgets, and the partition number.

Gadget coordinates are exact rationals: the recursive construction scales
copies by factors that leave the double range long before the number of
points becomes unmanageable, so floats are produced only on export.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _partition
from .errors import PreconditionError
from .geometry import as_points
from .sinr import SinrParams, f_matrix, gamma

__all__ = [
    "Instance",
    "Gadget",
    "gen_uniform",
    "gen_grid",
    "gadget_g1",
    "gadget_join",
    "gadget_scale",
    "rho",
    "log_rho",
    "gadget_copies",
    "gadget_gt",
    "gadget_links",
    "partition_number",
    "PARTITION_MAX_LINKS",
    "GADGET_MAX_POINTS",
]

PARTITION_MAX_LINKS = 12
GADGET_MAX_POINTS = 200_000


@dataclass
class Instance:
    points: np.ndarray
    params: SinrParams = field(default_factory=SinrParams)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.points = as_points(self.points)

    @property
    def n(self) -> int:
        return len(self.points)


def gen_uniform(n: int, seed: int, side: float = 1.0, params: SinrParams | None = None) -> Instance:
    """``n`` points uniform in ``[0, side)^2`` drawn with numpy's PCG64 generator."""
    if n < 0:
        raise PreconditionError("n must be nonnegative")
    rng = np.random.default_rng(seed)
    pts = rng.uniform(0.0, side, size=(n, 2))
    meta = {"generator": "uniform", "seed": seed, "n": n, "side": side, "prng": "numpy.PCG64"}
    return Instance(pts, params or SinrParams(), meta)


def gen_grid(n: int, spacing: float = 1.0, params: SinrParams | None = None) -> Instance:
    """First ``n`` points of a square lattice, row by row."""
    if n < 0:
        raise PreconditionError("n must be nonnegative")
    cols = max(1, math.ceil(math.sqrt(n)))
    idx = np.arange(n)
    pts = np.column_stack([idx % cols, idx // cols]).astype(np.float64) * spacing
    return Instance(pts, params or SinrParams(), {"generator": "grid", "n": n, "spacing": spacing})


@dataclass(frozen=True)
class Gadget:
    """Points on a line, left to right, held as exact rationals."""

    coords: tuple[Fraction, ...]

    def __post_init__(self):
        coords = tuple(Fraction(c) for c in self.coords)
        if not coords:
            raise PreconditionError("a gadget needs at least one point")
        if any(b <= a for a, b in zip(coords, coords[1:])):
            raise PreconditionError("gadget coordinates must be strictly increasing")
        object.__setattr__(self, "coords", coords)

    def __len__(self) -> int:
        return len(self.coords)

    @property
    def leftmost(self) -> Fraction:
        return self.coords[0]

    @property
    def rightmost(self) -> Fraction:
        return self.coords[-1]

    @property
    def diameter(self) -> Fraction:
        return self.rightmost - self.leftmost

    @property
    def gaps(self) -> list[Fraction]:
        return [b - a for a, b in zip(self.coords, self.coords[1:])]

    def to_points(self) -> np.ndarray:
        try:
            xs = np.array([float(c) for c in self.coords])
        except OverflowError:
            raise PreconditionError("gadget coordinates exceed the double range") from None
        if not np.all(np.isfinite(xs)):
            raise PreconditionError("gadget coordinates exceed the double range")
        return np.column_stack([xs, np.zeros(len(xs))])


def gadget_g1() -> Gadget:
    return Gadget((-28, 0, 2, 6, 14))


def gadget_join(first: Gadget, second: Gadget) -> Gadget:
    """Glue ``second`` on so its leftmost point lands on ``first``'s rightmost."""
    shift = first.rightmost - second.leftmost
    return Gadget(first.coords + tuple(c + shift for c in second.coords[1:]))


def gadget_scale(g: Gadget, factor) -> Gadget:
    factor = Fraction(factor)
    if factor <= 0:
        raise PreconditionError("scale factor must be positive")
    return Gadget(tuple(c * factor for c in g.coords))


def _log(q: Fraction) -> float:
    # math.log accepts arbitrarily large ints
    return math.log(q.numerator) - math.log(q.denominator)


def log_rho(g: Gadget, alpha: float) -> float:
    """Natural log of :func:`rho`; finite even when rho underflows."""
    if len(g) < 2:
        raise PreconditionError("rho needs at least one link")
    left = g.leftmost
    return min(
        alpha * (_log(b - a) - _log(max(a - left, b - left)))
        for a, b in zip(g.coords, g.coords[1:])
    )


def rho(g: Gadget, alpha: float) -> float:
    """Smallest ``(length / reach)**alpha`` over the gadget's MST links.

    The reach of a link is the larger distance from its endpoints to the
    gadget's leftmost point.
    """
    return math.exp(log_rho(g, alpha))


def gadget_copies(prev: Gadget, params: SinrParams, gamma_value: float | None = None) -> int:
    """Number of scaled copies of ``prev`` joined at the next level.

    ``ceil(8**alpha * gamma / rho(prev))``: enough copies that the longest
    link cannot share a part with a link from every copy.
    """
    g = gamma(params) if gamma_value is None else gamma_value
    log_i = params.alpha * math.log(8.0) + math.log(g) - log_rho(prev, params.alpha)
    if log_i > math.log(GADGET_MAX_POINTS):
        raise PreconditionError(f"next level needs about e^{log_i:.1f} copies")
    return max(1, math.ceil(math.exp(log_i) * (1 - 1e-12)))


def gadget_gt(
    t: int,
    params: SinrParams,
    copies: int | None = None,
    gamma_value: float | None = None,
    max_points: int = GADGET_MAX_POINTS,
) -> Gadget:
    """Recursive gadget ``G_t``.

    Level ``t`` joins ``I(t)`` copies of ``G_{t-1}``, each scaled so its
    shortest link is twice the span of everything before it, shifts the
    result to start at 0 and puts one extra point at ``-4 * span``.
    ``copies`` overrides ``I(t)`` at the top level only.
    """
    if t < 1:
        raise PreconditionError("t must be at least 1")
    if t == 1:
        return gadget_g1()
    prev = gadget_gt(t - 1, params, None, gamma_value, max_points)
    count = gadget_copies(prev, params, gamma_value) if copies is None else int(copies)
    if count < 1:
        raise PreconditionError("need at least one copy")
    if 1 + count * (len(prev) - 1) + 1 > max_points:
        raise PreconditionError(f"G_{t} would have more than {max_points} points")
    base = [c - prev.leftmost for c in prev.coords]
    min_gap = min(prev.gaps)
    coords = list(base)
    for _ in range(count - 1):
        span = coords[-1] - coords[0]
        h = 2 * span / min_gap
        shift = coords[-1]
        coords.extend(shift + c * h for c in base[1:])
    span = coords[-1] - coords[0]
    return Gadget(tuple([-4 * span] + coords))


def gadget_links(g: Gadget, orientation="right") -> list[tuple[Fraction, Fraction, int, int]]:
    """MST links of a gadget as ``(sender x, receiver x, sender idx, receiver idx)``.

    ``orientation`` is ``"right"``, ``"left"`` or a sequence of booleans
    (True = left to right) per link.
    """
    if isinstance(orientation, str):
        if orientation not in ("right", "left"):
            raise PreconditionError(f"unknown orientation {orientation!r}")
        flags = [orientation == "right"] * (len(g) - 1)
    else:
        flags = [bool(x) for x in orientation]
        if len(flags) != len(g) - 1:
            raise PreconditionError(f"need {len(g) - 1} orientation flags, got {len(flags)}")
    out = []
    for i, (a, b) in enumerate(zip(g.coords, g.coords[1:])):
        forward = flags[i]
        out.append((a, b, i, i + 1) if forward else (b, a, i + 1, i))
    return out


def _exact_f_matrix(links: Sequence[tuple[Fraction, Fraction, int, int]], alpha: float) -> np.ndarray:
    m = len(links)
    lengths = [abs(r - s) for s, r, _, _ in links]
    keys = [(lengths[i], links[i][2], links[i][3]) for i in range(m)]
    f = np.zeros((m, m))
    for i in range(m):
        for j in range(m):
            if i == j or keys[i] > keys[j]:
                continue
            si, ri = links[i][0], links[i][1]
            sj, rj = links[j][0], links[j][1]
            d = min(abs(si - rj), abs(sj - ri))
            if d == 0:
                f[i, j] = 1.0
            else:
                f[i, j] = min(1.0, math.exp(alpha * (_log(lengths[i]) - _log(d))))
    return f


def partition_number(
    target,
    gamma_value: float,
    alpha: float,
    orientation="right",
    subset: Sequence[int] | None = None,
) -> int:
    """Fewest parts such that every part meets the gamma condition.

    ``target`` is a :class:`Gadget` (its MST links, oriented as asked) or a
    list of links.  ``subset`` restricts to the given link indices; since a
    superset never needs fewer parts, that yields a lower bound.
    """
    if isinstance(target, Gadget):
        links = gadget_links(target, orientation)
        if subset is not None:
            links = [links[i] for i in subset]
        if len(links) > PARTITION_MAX_LINKS:
            raise PreconditionError(f"partition search is limited to {PARTITION_MAX_LINKS} links, got {len(links)}")
        f = _exact_f_matrix(links, alpha)
    else:
        links = list(target)
        if subset is not None:
            links = [links[i] for i in subset]
        if len(links) > PARTITION_MAX_LINKS:
            raise PreconditionError(f"partition search is limited to {PARTITION_MAX_LINKS} links, got {len(links)}")
        f = f_matrix(links, alpha)
    m = len(links)
    if m == 0:
        return 0
    table = _partition.gamma_admissible_table(f, gamma_value)
    return int(_partition.min_partition(table, m))
