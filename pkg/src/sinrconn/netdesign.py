"""Biconnected and k-edge connected structures, plus graph verifiers."""
from __future__ import annotations

from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from .errors import PreconditionError
from .geometry import Link, Tree, as_points, euclidean_mst, make_link
from .scheduler import Schedule, connect
from .sinr import SinrParams

__all__ = [
    "both_orientations",
    "biconnect_links",
    "biconnect_structure",
    "disjoint_trees",
    "k_edge_structure",
    "verify_strong_connectivity",
    "verify_k_edge_strong",
    "verify_bi_connectivity",
]


def both_orientations(points, edges: Iterable[tuple[int, int]]) -> list[Link]:
    links = []
    for i, j in edges:
        links.append(make_link(points, i, j))
        links.append(make_link(points, j, i))
    return links


def biconnect_links(points) -> tuple[Tree, list[tuple[int, int]], list[Link]]:
    """MST, the MST on its leaves mapped back to point ids, and the doubled union."""
    pts = as_points(points)
    if len(pts) < 3:
        raise PreconditionError("biconnectivity needs at least three points")
    tree = euclidean_mst(pts)
    leaves = np.flatnonzero(tree.degrees() == 1)
    extra: list[tuple[int, int]] = []
    if len(leaves) >= 2:
        sub = euclidean_mst(pts[leaves])
        extra = sorted((int(min(leaves[a], leaves[b])), int(max(leaves[a], leaves[b]))) for a, b in sub.edges)
    edges = sorted(set(tree.edges) | set(extra))
    return tree, extra, both_orientations(pts, edges)


def biconnect_structure(points, params: SinrParams, gamma_value: float | None = None) -> Schedule:
    _, _, links = biconnect_links(points)
    return connect(links, params, gamma_value, source="biconnect")


def disjoint_trees(points, count: int) -> list[Tree]:
    """``count`` edge-disjoint spanning trees, each minimal given the earlier ones."""
    pts = as_points(points)
    n = len(pts)
    forbidden = np.zeros((n, n), dtype=bool)
    np.fill_diagonal(forbidden, True)
    trees = []
    for _ in range(count):
        tree = euclidean_mst(pts, forbidden=forbidden)
        for i, j in tree.edges:
            forbidden[i, j] = forbidden[j, i] = True
        trees.append(tree)
    return trees


def k_edge_structure(
    points, params: SinrParams, k: int, gamma_value: float | None = None
) -> tuple[list[Tree], list[Schedule]]:
    """Trees ``T_0..T_k`` and a Connect schedule for each tree in each orientation."""
    pts = as_points(points)
    n = len(pts)
    if k < 1:
        raise PreconditionError("k must be at least 1")
    if k >= n - 1:
        raise PreconditionError(f"k={k} needs fewer than n-1={n - 1}")
    trees = disjoint_trees(pts, k + 1)
    schedules = []
    for idx, tree in enumerate(trees):
        for direction, edges in (("fwd", tree.edges), ("rev", [(j, i) for i, j in tree.edges])):
            links = [make_link(pts, i, j) for i, j in edges]
            schedules.append(connect(links, params, gamma_value, source=f"tree{idx}-{direction}"))
    return trees, schedules


def _digraph(links: Iterable, n: int | None) -> nx.DiGraph:
    g = nx.DiGraph()
    if n is not None:
        g.add_nodes_from(range(n))
    for link in links:
        s, r = (link.sender, link.receiver) if isinstance(link, Link) else link
        g.add_edge(int(s), int(r))
    return g


def verify_strong_connectivity(links: Iterable, n: int | None = None) -> bool:
    """Every node reaches node 0 and is reached from it."""
    g = _digraph(links, n)
    if g.number_of_nodes() <= 1:
        return True
    root = min(g.nodes)
    return len(nx.descendants(g, root)) == g.number_of_nodes() - 1 and len(
        nx.ancestors(g, root)
    ) == g.number_of_nodes() - 1


def verify_k_edge_strong(links: Iterable, k: int, n: int | None = None) -> bool:
    """Every directed cut separating node 0 from another node has at least ``k`` edges."""
    g = _digraph(links, n)
    if g.number_of_nodes() <= 1:
        return True
    nx.set_edge_attributes(g, 1, "capacity")
    root = min(g.nodes)
    for v in g.nodes:
        if v == root:
            continue
        if nx.maximum_flow_value(g, root, v) < k or nx.maximum_flow_value(g, v, root) < k:
            return False
    return True


def verify_bi_connectivity(links: Sequence, n: int | None = None) -> bool:
    """Strong connectivity survives the removal of any single vertex."""
    g = _digraph(links, n)
    if g.number_of_nodes() <= 2:
        return True
    if not nx.is_strongly_connected(g):
        return False
    for v in list(g.nodes):
        h = g.copy()
        h.remove_node(v)
        if not nx.is_strongly_connected(h):
            return False
    return True
