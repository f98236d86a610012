import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sinrconn.bidirectional import (
    Pair,
    bidi_assign_powers,
    bidi_connect,
    bidi_f_sum,
    bidi_feasible,
    bidi_solve_powers,
    gamma_bidi,
    pair_admissible,
    symmetric_conflict_certificate,
    symmetric_lb_instance,
)
from sinrconn.errors import PreconditionError
from sinrconn.geometry import euclidean_mst, link_distance, orient
from sinrconn.instances import gen_uniform
from sinrconn.scheduler import connect, min_slots_bruteforce
from sinrconn.sinr import SinrParams, gamma

P3 = SinrParams()


def _mst_pairs(pts):
    return [Pair.from_points(pts, i, j) for i, j in euclidean_mst(pts).edges]


def _far_pairs():
    pts = np.array([[0, 0], [1, 0], [1e4, 0], [1e4 + 1, 0]])
    return pts, [Pair.from_points(pts, 0, 1), Pair.from_points(pts, 2, 3)]


def test_pair_basics():
    pts = np.array([[0, 0], [3, 4]])
    p = Pair.from_points(pts, 0, 1)
    assert p.length == 5
    fwd, rev = p.links
    assert (fwd.sender, fwd.receiver, rev.sender, rev.receiver) == (0, 1, 1, 0)
    with pytest.raises(PreconditionError):
        Pair.from_points(pts, 1, 1)


def test_gamma_bidi_default():
    assert gamma_bidi(P3) == gamma(P3) / 4


def test_bidi_feasible_examples():
    pts = np.array([[0, 0], [1, 0]])
    single = Pair.from_points(pts, 0, 1)
    assert bidi_feasible([single], {l: 1.0 for l in single.links}, P3).passed
    _, far = _far_pairs()
    powers = {l: 1.0 for p in far for l in p.links}
    assert bidi_feasible(far, powers, P3).passed
    a = Pair.from_points(np.array([[0, 0], [1, 0], [2, 0]]), 0, 1)
    b = Pair.from_points(np.array([[0, 0], [1, 0], [2, 0]]), 1, 2)
    with pytest.raises(PreconditionError):
        bidi_feasible([a, b], {}, P3)


def test_bidi_feasible_matches_hand_sum():
    pts = np.array([[0, 0], [1, 0], [5, 0], [7, 0]])
    a, b = Pair.from_points(pts, 0, 1), Pair.from_points(pts, 2, 3)
    powers = {a.links[0]: 1.0, a.links[1]: 2.0, b.links[0]: 3.0, b.links[1]: 4.0}
    rep = bidi_feasible([a, b], powers, P3)
    for tgt in a.links:
        interference = sum(powers[src] / link_distance(src, tgt) ** 3 for src in b.links)
        assert rep.sinr[tgt] == pytest.approx(powers[tgt] / tgt.length**3 / interference, rel=1e-12)


def test_symmetric_pairs_on_lb_instance_always_conflict():
    pts = symmetric_lb_instance(5)
    pairs = _mst_pairs(pts)
    rng = np.random.default_rng(0)
    for a, b in itertools.combinations(pairs, 2):
        if set(a.nodes) & set(b.nodes):
            continue
        for _ in range(50):
            pa, pb = 10 ** rng.uniform(-6, 6, 2)
            powers = {a.links[0]: pa, a.links[1]: pa, b.links[0]: pb, b.links[1]: pb}
            assert not bidi_feasible([a, b], powers, P3).passed


def test_bidi_f_sum_examples():
    _, far = _far_pairs()
    assert bidi_f_sum(far, far[0], 3) < 1e-9
    assert bidi_f_sum([far[0]], far[0], 3) == 0
    pts = np.array([[-1, 0], [1, 0], [0, -1.5], [0, 1.5]])
    a, b = Pair.from_points(pts, 0, 1), Pair.from_points(pts, 2, 3)
    value = bidi_f_sum([a, b], b, 3)
    assert 0 < value <= 4


def test_bidi_assign_powers_ignore_twin():
    pts = np.array([[0, 0], [1, 0]])
    p = Pair.from_points(pts, 0, 1)
    powers = bidi_assign_powers([p], P3)
    assert set(powers) == set(p.links)
    assert all(v > 0 for v in powers.values())


@pytest.mark.parametrize("seed", range(3))
def test_bidi_connect(seed):
    pts = gen_uniform(256, seed).points
    s = bidi_connect(pts, P3)
    assert sorted(p.key for p in s.links()) == sorted(p.key for p in _mst_pairs(pts))
    for slot in s.slots:
        assert bidi_feasible(slot.links, slot.powers, P3).passed
    uni = connect(orient(euclidean_mst(pts), 0, "toward"), P3)
    assert len(s) <= 4 * len(uni)


def test_bidi_connect_small():
    s = bidi_connect(np.array([[0, 0], [1, 0]]), P3)
    assert len(s) == 1 and len(s.slots[0].links) == 1
    with pytest.raises(PreconditionError):
        bidi_connect(np.array([[0, 0]]), P3)


def test_bidi_connect_on_lb_instance_recorded():
    # asymmetric powers can do better than the symmetric bound; just check validity
    pts = symmetric_lb_instance(6)
    s = bidi_connect(pts, P3)
    assert 1 <= len(s) <= 5
    for slot in s.slots:
        assert bidi_feasible(slot.links, slot.powers, P3).passed


def test_recurrence_can_fail_on_pairs():
    # {0,1} and {128,32768}: tiny f-sum, yet the flattened recurrence starves 32768->128
    pts = symmetric_lb_instance(6)
    a, b = Pair.from_points(pts, 0, 1), Pair.from_points(pts, 4, 5)
    assert bidi_f_sum([a, b], b, 3) < gamma_bidi(P3)
    assert not bidi_feasible([a, b], bidi_assign_powers([a, b], P3), P3).passed
    solved = bidi_solve_powers([a, b], P3)
    assert solved is not None
    assert bidi_feasible([a, b], solved, P3).passed


def test_solve_powers_reports_infeasible():
    # symmetric-instance neighbours at distance 1 from each other cannot coexist
    pts = np.array([[0, 0], [1, 0], [1.5, 0], [2.5, 0]])
    a, b = Pair.from_points(pts, 0, 1), Pair.from_points(pts, 2, 3)
    assert bidi_solve_powers([a, b], P3) is None


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_solve_powers_are_feasible_when_found(seed):
    rng = np.random.default_rng(seed)
    pts = rng.uniform(0, 20, (6, 2))
    pairs = [Pair.from_points(pts, 0, 1), Pair.from_points(pts, 2, 3), Pair.from_points(pts, 4, 5)]
    powers = bidi_solve_powers(pairs, SinrParams(3.0, 1.0, 0.01))
    if powers is not None:
        assert bidi_feasible(pairs, powers, SinrParams(3.0, 1.0, 0.01)).passed


def test_symmetric_lb_instance_values():
    assert symmetric_lb_instance(5)[:, 0].tolist() == [0, 1, 2, 8, 128]
    assert symmetric_lb_instance(2)[:, 0].tolist() == [0, 1]
    xs = symmetric_lb_instance(8)[:, 0]
    # the gap is exactly x_1**2 = 1 at m = 2 and strictly larger afterwards
    assert xs[2] - xs[1] == xs[1] ** 2
    for m in range(3, 8):
        assert xs[m] - xs[m - 1] > xs[m - 1] ** 2
    with pytest.raises(PreconditionError):
        symmetric_lb_instance(9)
    with pytest.raises(PreconditionError):
        symmetric_lb_instance(1)


def test_certificate_examples():
    pairs = _mst_pairs(symmetric_lb_instance(5))
    for a, b in itertools.combinations(pairs, 2):
        assert symmetric_conflict_certificate(a, b, 3) > 1
    _, far = _far_pairs()
    assert symmetric_conflict_certificate(*far, 3) < 1e-9
    with pytest.raises(PreconditionError):
        symmetric_conflict_certificate(far[0], far[0], 3)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_certificate_is_power_free(seed):
    rng = np.random.default_rng(seed)
    pts = rng.uniform(0, 10, (4, 2))
    first, second = Pair.from_points(pts, 0, 1), Pair.from_points(pts, 2, 3)
    cert = symmetric_conflict_certificate(first, second, 3)
    for _ in range(100):
        p1, p2 = 10 ** rng.uniform(-3, 3, 2)
        best = 0.0
        for la, lb, lc, ld in itertools.product(first.links, second.links, second.links, first.links):
            # raw affectances with symmetric powers p1 on the first pair and p2 on the second
            a1 = (p1 / link_distance(la, lb) ** 3) / (p2 / lb.length**3)
            a2 = (p2 / link_distance(lc, ld) ** 3) / (p1 / ld.length**3)
            best = max(best, a1 * a2)
        assert best == pytest.approx(cert, rel=1e-9)


def test_lb_instance_bruteforce_needs_one_slot_per_pair():
    pts = symmetric_lb_instance(6)
    pairs = _mst_pairs(pts)
    mean = lambda x: x**1.5
    assert min_slots_bruteforce(pairs, P3, mean) == 5
    assert not pair_admissible(pairs[:2], P3, lambda x: 1.0)
