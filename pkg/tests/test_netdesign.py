import itertools
from collections import deque

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from _frozen import KEDGE_C
from sinrconn.errors import PreconditionError
from sinrconn.geometry import euclidean_mst, make_link, orient
from sinrconn.instances import gen_uniform
from sinrconn.netdesign import (
    biconnect_links,
    biconnect_structure,
    both_orientations,
    disjoint_trees,
    k_edge_structure,
    verify_bi_connectivity,
    verify_k_edge_strong,
    verify_strong_connectivity,
)
from sinrconn.scheduler import connect, strong_connect
from sinrconn.sinr import SinrParams, is_feasible

P3 = SinrParams()


def _reach(arcs, start, nodes):
    adj = {v: [] for v in nodes}
    for s, r in arcs:
        if s in adj and r in adj:
            adj[s].append(r)
    seen, todo = {start}, deque([start])
    while todo:
        for w in adj[todo.popleft()]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


def _strong_oracle(arcs, nodes):
    nodes = set(nodes)
    if len(nodes) <= 1:
        return True
    v = min(nodes)
    rev = [(r, s) for s, r in arcs]
    return _reach(arcs, v, nodes) == nodes and _reach(rev, v, nodes) == nodes


def _kedge_oracle(arcs, k, n):
    """Every nonempty proper subset has at least k arcs leaving it (brute force)."""
    for size in range(1, n):
        for sub in itertools.combinations(range(n), size):
            inside = set(sub)
            if sum(1 for s, r in arcs if s in inside and r not in inside) < k:
                return False
    return True


def _arcs(links):
    return [(l.sender, l.receiver) for l in links]


def test_verify_examples():
    tri = [(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)]
    assert verify_strong_connectivity(tri)
    assert verify_k_edge_strong(tri, 2)
    assert verify_bi_connectivity(tri)
    path = [(0, 1), (1, 0), (1, 2), (2, 1)]
    assert verify_strong_connectivity(path)
    assert verify_k_edge_strong(path, 1)
    assert not verify_k_edge_strong(path, 2)
    assert not verify_bi_connectivity(path)
    cycle = [(0, 1), (1, 2), (2, 3), (3, 0)]
    assert verify_k_edge_strong(cycle, 1) and not verify_k_edge_strong(cycle, 2)
    arb = [(1, 0), (2, 0), (3, 1)]
    assert not verify_strong_connectivity(arb)
    assert verify_strong_connectivity([], n=1)
    assert not verify_strong_connectivity([(0, 1), (1, 0)], n=3)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 6), st.integers(1, 3))
def test_verifiers_match_brute_force(seed, n, k):
    rng = np.random.default_rng(seed)
    arcs = [(i, j) for i in range(n) for j in range(n) if i != j and rng.random() < 0.5]
    assert verify_strong_connectivity(arcs, n) == _strong_oracle(arcs, range(n))
    assert verify_k_edge_strong(arcs, k, n) == _kedge_oracle(arcs, k, n)
    if n >= 3:
        expect = _strong_oracle(arcs, range(n)) and all(
            _strong_oracle(arcs, set(range(n)) - {v}) for v in range(n)
        )
        assert verify_bi_connectivity(arcs, n) == expect


def test_both_orientations():
    pts = np.array([[0, 0], [1, 0], [2, 0]])
    links = both_orientations(pts, [(0, 1), (1, 2)])
    assert sorted(_arcs(links)) == [(0, 1), (1, 0), (1, 2), (2, 1)]


def test_biconnect_three_collinear_points_gives_triangle():
    pts = np.array([[0, 0], [1, 0], [2, 0]])
    tree, extra, links = biconnect_links(pts)
    assert extra == [(0, 2)]
    assert len(links) == 6
    assert verify_bi_connectivity(links, 3)
    with pytest.raises(PreconditionError):
        biconnect_links(pts[:2])


@pytest.mark.parametrize("n", [10, 64])
@pytest.mark.parametrize("seed", range(3))
def test_biconnect_structure(n, seed):
    pts = gen_uniform(n, seed).points
    s = biconnect_structure(pts, P3)
    _, _, links = biconnect_links(pts)
    assert set(s.links()) == set(links)
    assert verify_bi_connectivity(s.links(), n)
    for slot in s.slots:
        assert is_feasible(slot.links, slot.powers, P3).passed


@pytest.mark.parametrize("seed", range(3))
def test_biconnect_slots_compared_with_strong(seed):
    pts = gen_uniform(128, seed).points
    up, down = strong_connect(pts, P3)
    assert len(biconnect_structure(pts, P3)) <= 2 * (len(up) + len(down))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_disjoint_trees(k):
    pts = gen_uniform(40, 1).points
    trees = disjoint_trees(pts, k + 1)
    edges = [frozenset(e) for t in trees for e in t.edges]
    assert len(edges) == len(set(edges)) == (k + 1) * 39
    assert trees[0].edges == euclidean_mst(pts).edges
    weights = [t.weight() for t in trees]
    assert weights == sorted(weights)


@pytest.mark.parametrize("k", [1, 2])
@pytest.mark.parametrize("seed", range(2))
def test_k_edge_structure(k, seed):
    pts = gen_uniform(48, seed).points
    trees, schedules = k_edge_structure(pts, P3, k)
    assert len(trees) == k + 1 and len(schedules) == 2 * (k + 1)
    links = [l for s in schedules for l in s.links()]
    assert verify_k_edge_strong(links, k, 48)
    for s in schedules:
        for slot in s.slots:
            assert is_feasible(slot.links, slot.powers, P3).passed
    base = len(connect(orient(euclidean_mst(pts), 0, "toward"), P3))
    total = sum(len(s) for s in schedules)
    assert total <= KEDGE_C * (k + 1) ** 3 * base


def test_k_edge_preconditions():
    pts = gen_uniform(6, 0).points
    with pytest.raises(PreconditionError):
        k_edge_structure(pts, P3, 0)
    with pytest.raises(PreconditionError):
        k_edge_structure(pts, P3, 5)


def test_kedge_small_matches_brute_force():
    pts = gen_uniform(9, 3).points
    trees, schedules = k_edge_structure(pts, P3, 2)
    arcs = _arcs([l for s in schedules for l in s.links()])
    assert _kedge_oracle(arcs, 2, 9)


def test_disjoint_trees_can_run_out_of_edges():
    # three spanning trees on six points would need all fifteen edges of K6
    with pytest.raises(PreconditionError):
        disjoint_trees(gen_uniform(6, 3).points, 3)
