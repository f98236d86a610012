"""Planar points, directed links, Euclidean MSTs and the annulus covering.

Point sets are plain ``(n, 2)`` float arrays; the id of a point is its row
index unless an explicit ``ids`` sequence is supplied.  A :class:`Link`
carries the coordinates of both endpoints so that distance computations
never need the originating point set.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import PreconditionError

__all__ = [
    "Point",
    "Link",
    "Tree",
    "as_points",
    "distance",
    "make_link",
    "link_distance",
    "symmetric_link_distance",
    "pairwise_distances",
    "euclidean_mst",
    "orient",
    "reverse_links",
    "nearest_neighbor_forest",
    "annulus_unit_centers",
    "annulus_cover",
    "long_edge_disc_counts",
]


class Point(NamedTuple):
    id: int
    x: float
    y: float


def as_points(points) -> np.ndarray:
    """Return ``points`` as a finite float64 array of shape ``(n, 2)``."""
    arr = np.asarray(points, dtype=np.float64)
    if arr.size == 0:
        return arr.reshape(0, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise PreconditionError(f"expected an (n, 2) array of coordinates, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise PreconditionError("coordinates must be finite")
    return arr


def _xy(p) -> tuple[float, float]:
    if isinstance(p, Point):
        return (p.x, p.y)
    return (float(p[0]), float(p[1]))


def distance(p, q) -> float:
    """Euclidean distance between two points (``Point`` or ``(x, y)``)."""
    (px, py), (qx, qy) = _xy(p), _xy(q)
    return float(np.hypot(px - qx, py - qy))


@dataclass(frozen=True)
class Link:
    """Directed link ``sender -> receiver``.

    Equality and hashing use only the two point ids, so a link can key a
    power assignment regardless of how it was constructed.
    """

    sender: int
    receiver: int
    s: tuple[float, float] = field(compare=False, repr=False)
    r: tuple[float, float] = field(compare=False, repr=False)
    length: float = field(init=False, compare=False)

    def __post_init__(self):
        if self.sender == self.receiver:
            raise PreconditionError(f"link endpoints coincide: {self.sender}")
        object.__setattr__(self, "s", _xy(self.s))
        object.__setattr__(self, "r", _xy(self.r))
        object.__setattr__(self, "length", distance(self.s, self.r))

    @property
    def key(self) -> tuple[float, int, int]:
        """Global total order: length, then sender id, then receiver id."""
        return (self.length, self.sender, self.receiver)

    def reversed(self) -> "Link":
        return Link(self.receiver, self.sender, self.r, self.s)


def make_link(points, sender: int, receiver: int, ids: Sequence[int] | None = None) -> Link:
    """Build the link between rows ``sender`` and ``receiver`` of ``points``."""
    pts = np.asarray(points, dtype=np.float64)
    sid = sender if ids is None else int(ids[sender])
    rid = receiver if ids is None else int(ids[receiver])
    return Link(sid, rid, tuple(pts[sender]), tuple(pts[receiver]))


def link_distance(a: Link, b: Link) -> float:
    """Asymmetric distance from ``a``'s sender to ``b``'s receiver."""
    return distance(a.s, b.r)


def symmetric_link_distance(a: Link, b: Link) -> float:
    return min(link_distance(a, b), link_distance(b, a))


def pairwise_distances(points) -> np.ndarray:
    pts = as_points(points)
    diff = pts[:, None, :] - pts[None, :, :]
    return np.hypot(diff[..., 0], diff[..., 1])


@dataclass
class Tree:
    """Undirected spanning tree on ``points``; edges are ``(i, j)`` with ``i < j``."""

    points: np.ndarray
    edges: list[tuple[int, int]]
    root: int | None = None
    orientation: str = "unoriented"

    @property
    def n(self) -> int:
        return len(self.points)

    def weight(self) -> float:
        return float(sum(distance(self.points[i], self.points[j]) for i, j in self.edges))

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=int)
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        for nbrs in adj:
            nbrs.sort()
        return adj


def euclidean_mst(points, forbidden: np.ndarray | None = None) -> Tree:
    """Minimum spanning tree of the complete Euclidean graph (Prim, O(n^2)).

    Ties in edge length are broken by the lexicographically smaller
    ``(min id, max id)`` pair, which makes the tree unique.  ``forbidden``
    is an optional boolean ``(n, n)`` mask of edges that may not be used.
    """
    pts = as_points(points)
    n = len(pts)
    if n == 0:
        raise PreconditionError("cannot build a spanning tree on zero points")
    dist = pairwise_distances(pts)
    if forbidden is not None:
        dist = np.where(forbidden, np.inf, dist)
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    best = dist[0].copy()
    parent = np.zeros(n, dtype=np.int64)
    ids = np.arange(n)
    edges = []
    for _ in range(n - 1):
        cand = np.flatnonzero(~in_tree)
        b = best[cand]
        m = b.min()
        if not np.isfinite(m):
            raise PreconditionError("allowed edges do not connect the point set")
        ties = cand[b == m]
        if len(ties) > 1:
            lo = np.minimum(ties, parent[ties])
            hi = np.maximum(ties, parent[ties])
            ties = ties[np.lexsort((hi, lo))]
        v = int(ties[0])
        in_tree[v] = True
        u = int(parent[v])
        edges.append((min(u, v), max(u, v)))
        nd = dist[v]
        lo_new, hi_new = np.minimum(ids, v), np.maximum(ids, v)
        lo_old, hi_old = np.minimum(ids, parent), np.maximum(ids, parent)
        key_less = (lo_new < lo_old) | ((lo_new == lo_old) & (hi_new < hi_old))
        better = ~in_tree & np.isfinite(nd) & ((nd < best) | ((nd == best) & key_less))
        best = np.where(better, nd, best)
        parent = np.where(better, v, parent)
    edges.sort()
    return Tree(pts, edges)


def orient(tree: Tree, root: int, direction: str = "toward", ids: Sequence[int] | None = None) -> list[Link]:
    """Turn every tree edge into one directed link.

    ``direction="toward"`` gives an in-arborescence rooted at ``root``,
    ``"away"`` the out-arborescence.  Links are listed in BFS order.
    """
    if direction not in ("toward", "away"):
        raise PreconditionError(f"direction must be 'toward' or 'away', got {direction!r}")
    if not 0 <= root < tree.n:
        raise PreconditionError(f"root {root} is not a point of the tree")
    adj = tree.adjacency()
    seen = {root}
    queue = deque([root])
    links = []
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v in seen:
                continue
            seen.add(v)
            queue.append(v)
            if direction == "away":
                links.append(make_link(tree.points, u, v, ids))
            else:
                links.append(make_link(tree.points, v, u, ids))
    if len(seen) != tree.n:
        raise PreconditionError("tree does not span its point set")
    tree.root = root
    tree.orientation = "toward-root" if direction == "toward" else "away-from-root"
    return links


def reverse_links(links: Sequence[Link]) -> list[Link]:
    return [link.reversed() for link in links]


def nearest_neighbor_forest(points, ids: Sequence[int] | None = None) -> list[Link]:
    """Every point links to its nearest other point; mutual pairs keep one link.

    Nearest-neighbour ties go to the smallest id, and of two antiparallel
    links the one whose sender has the smaller id survives.
    """
    pts = as_points(points)
    n = len(pts)
    if n < 2:
        raise PreconditionError("nearest-neighbour forest needs at least two points")
    id_arr = np.arange(n) if ids is None else np.asarray(ids, dtype=np.int64)
    # sort rows by id so that argmin picks the smallest id among ties
    order = np.argsort(id_arr, kind="stable")
    dist = pairwise_distances(pts[order])
    np.fill_diagonal(dist, np.inf)
    nn = order[np.argmin(dist, axis=1)]
    target = np.empty(n, dtype=np.int64)
    target[order] = nn
    links = []
    for row in order:
        other = int(target[row])
        if target[other] == row and id_arr[other] < id_arr[row]:
            continue
        links.append(make_link(pts, int(row), other, id_arr))
    return links


def annulus_unit_centers(t: int) -> np.ndarray:
    """Centres of the unit discs covering the annulus ``t < |x| <= t + 1``.

    ``ceil(4 pi (t + 0.5))`` equally spaced points on the mid circle.
    """
    if t < 1:
        raise PreconditionError("t must be >= 1")
    radius = t + 0.5
    m = math.ceil(4 * math.pi * radius)
    theta = 2 * math.pi * np.arange(m) / m
    return np.column_stack([radius * np.cos(theta), radius * np.sin(theta)])


def _unit_disc_subcover(c1: float) -> np.ndarray:
    # square cells of side c1*sqrt(2) are each contained in a radius-c1 disc
    side = c1 * math.sqrt(2.0)
    k = math.ceil(2.0 / side)
    offsets = (np.arange(k) + 0.5) * side - k * side / 2
    gx, gy = np.meshgrid(offsets, offsets)
    cells = np.column_stack([gx.ravel(), gy.ravel()])
    # keep cells whose square meets the unit disc
    nearest = np.clip(np.zeros_like(cells), cells - side / 2, cells + side / 2)
    keep = np.hypot(nearest[:, 0], nearest[:, 1]) <= 1.0
    return cells[keep]


def annulus_cover(t: int, c1: float = 0.25) -> np.ndarray:
    """Radius-``c1`` disc centres covering the annulus ``t < |x| <= t + 1``."""
    if c1 <= 0:
        raise PreconditionError("c1 must be positive")
    units = annulus_unit_centers(t)
    if c1 >= 1.0:
        return units
    sub = _unit_disc_subcover(c1)
    return (units[:, None, :] + sub[None, :, :]).reshape(-1, 2)


def long_edge_disc_counts(points, tree: Tree, scale: float, centers) -> np.ndarray:
    """Per probe disc, how many endpoints of tree edges of length ``>= scale`` lie inside.

    Discs have radius ``scale / 4`` and the given centres.  Each point is
    counted once even if it ends several long edges.
    """
    pts = as_points(points)
    centers = np.asarray(centers, dtype=np.float64).reshape(-1, 2)
    ends = sorted({v for i, j in tree.edges if distance(pts[i], pts[j]) >= scale for v in (i, j)})
    if not ends or len(centers) == 0:
        return np.zeros(len(centers), dtype=int)
    e = pts[ends]
    d = np.hypot(centers[:, None, 0] - e[None, :, 0], centers[:, None, 1] - e[None, :, 1])
    return (d <= scale / 4).sum(axis=1)
