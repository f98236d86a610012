import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sinrconn.errors import PreconditionError
from sinrconn.geometry import Link
from sinrconn.instances import (
    Gadget,
    gadget_copies,
    gadget_g1,
    gadget_gt,
    gadget_join,
    gadget_links,
    gadget_scale,
    gen_grid,
    gen_uniform,
    log_rho,
    partition_number,
    rho,
)
from sinrconn.sinr import SinrParams, gamma

P3 = SinrParams()
G = gamma(P3)


def _set_partitions(items):
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[head]] + part
        for i in range(len(part)):
            yield part[:i] + [[head] + part[i]] + part[i + 1 :]


def _f_exact(a, b, alpha):
    """f of link a on link b for (sender x, receiver x, sender id, receiver id) tuples."""
    la, lb = abs(a[1] - a[0]), abs(b[1] - b[0])
    if (la, a[2], a[3]) >= (lb, b[2], b[3]):
        return 0.0
    d = min(abs(a[0] - b[1]), abs(b[0] - a[1]))
    return 1.0 if d == 0 else min(1.0, float(la / d) ** alpha)


def _partition_oracle(links, g, alpha):
    best = math.inf
    for parts in _set_partitions(list(range(len(links)))):
        if len(parts) >= best:
            continue
        if all(
            sum(_f_exact(links[i], links[j], alpha) for i in part if i != j) <= g
            for part in parts
            for j in part
        ):
            best = len(parts)
    return best


def test_gen_uniform_golden_and_deterministic():
    inst = gen_uniform(5, 0)
    ref = np.random.default_rng(0).uniform(0, 1, (5, 2))
    assert np.array_equal(inst.points, ref)
    assert inst.points[0].tolist() == pytest.approx([0.6369616873214543, 0.2697867137638703], abs=0)
    assert np.array_equal(gen_uniform(50, 7).points, gen_uniform(50, 7).points)
    assert not np.array_equal(gen_uniform(50, 7).points, gen_uniform(50, 8).points)
    assert gen_uniform(0, 1).n == 0
    assert gen_uniform(10, 1, side=5.0).points.max() < 5.0
    assert inst.metadata["prng"] == "numpy.PCG64"
    with pytest.raises(PreconditionError):
        gen_uniform(-1, 0)


def test_gen_grid():
    pts = gen_grid(5, spacing=2.0).points
    assert pts.tolist() == [[0, 0], [2, 0], [4, 0], [0, 2], [2, 2]]
    assert gen_grid(0).n == 0


def test_g1_shape():
    g = gadget_g1()
    assert [int(c) for c in g.coords] == [-28, 0, 2, 6, 14]
    assert g.gaps == [28, 2, 4, 8]
    assert g.diameter == 42
    with pytest.raises(PreconditionError):
        Gadget((0, 0, 1))
    with pytest.raises(PreconditionError):
        Gadget(())


def test_join_and_scale():
    g = gadget_g1()
    j = gadget_join(g, g)
    assert len(j) == 9
    assert j.gaps == g.gaps + g.gaps
    s = gadget_scale(Gadget((-1, 0, Fraction(1, 10), Fraction(1, 4))), 10)
    assert s.coords == (-10, 0, 1, Fraction(5, 2))
    with pytest.raises(PreconditionError):
        gadget_scale(g, 0)


def test_rho_values():
    assert rho(gadget_g1(), 3) == pytest.approx(1 / 3375, rel=1e-12)
    assert rho(Gadget((0, 5)), 3) == 1.0
    with pytest.raises(PreconditionError):
        rho(Gadget((1,)), 3)


@settings(max_examples=50, deadline=None)
@given(
    st.lists(st.integers(1, 1000), min_size=1, max_size=8),
    st.fractions(Fraction(1, 1000), 1000),
    st.floats(2.1, 5.0),
)
def test_rho_at_most_one_and_scale_invariant(gaps, factor, alpha):
    g = Gadget(tuple(np.cumsum([0] + gaps).tolist()))
    r = rho(g, alpha)
    assert 0 < r <= 1
    assert log_rho(gadget_scale(g, factor), alpha) == pytest.approx(log_rho(g, alpha), abs=1e-9)


def test_copies_and_g2_structure():
    g1 = gadget_g1()
    count = gadget_copies(g1, P3)
    # ceil(8**3 * gamma / rho(G1)) = ceil(512 * 3375 / 648)
    assert count == math.ceil(Fraction(512 * 3375, 648)) == 2667
    g2 = gadget_gt(2, P3)
    assert len(g2) == 2 + count * 4
    gaps = g2.gaps
    assert gaps[0] == 4 * (g2.rightmost - g2.coords[1])
    assert max(gaps[1:]) < gaps[0]
    # each copy's shortest link is twice the span of everything before it
    for c in range(1, 5):
        copy_gaps = gaps[1 + 4 * c : 5 + 4 * c]
        assert min(copy_gaps) == 2 * (g2.coords[1 + 4 * c] - g2.coords[1])


def test_gt_small_copies_and_guards():
    g = gadget_gt(2, P3, copies=3)
    assert len(g) == 14
    assert gadget_gt(1, P3) == gadget_g1()
    with pytest.raises(PreconditionError):
        gadget_gt(0, P3)
    with pytest.raises(PreconditionError):
        gadget_gt(3, P3)
    with pytest.raises(PreconditionError):
        gadget_gt(2, P3, copies=0)
    with pytest.raises(PreconditionError):
        gadget_gt(2, P3).to_points()
    assert gadget_gt(2, P3, copies=2).to_points().shape == (10, 2)


def test_gadget_links_orientation():
    g = gadget_g1()
    right = gadget_links(g)
    assert [(s, r) for s, r, _, _ in right] == [(-28, 0), (0, 2), (2, 6), (6, 14)]
    left = gadget_links(g, "left")
    assert [(i, j) for _, _, i, j in left] == [(1, 0), (2, 1), (3, 2), (4, 3)]
    mixed = gadget_links(g, [True, False, True, False])
    assert [(i, j) for _, _, i, j in mixed] == [(0, 1), (2, 1), (2, 3), (4, 3)]
    with pytest.raises(PreconditionError):
        gadget_links(g, "up")
    with pytest.raises(PreconditionError):
        gadget_links(g, [True])


def test_partition_number_g1():
    # every pair in G1 breaks the gamma condition, so each link needs its own part
    assert partition_number(gadget_g1(), G, 3) == 4
    assert _partition_oracle(gadget_links(gadget_g1()), G, 3) == 4


def test_partition_number_trivial_cases():
    far = [Link(0, 1, (0, 0), (1, 0)), Link(2, 3, (1e6, 0), (1e6 + 1, 0))]
    assert partition_number(far, G, 3) == 1
    assert partition_number([], G, 3) == 0
    with pytest.raises(PreconditionError):
        partition_number(gadget_gt(2, P3, copies=4), G, 3)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["right", "left", "mixed"]))
def test_partition_number_matches_oracle(seed, orient):
    rng = np.random.default_rng(seed)
    g = Gadget(tuple(np.cumsum([0] + rng.integers(1, 200, 6).tolist()).tolist()))
    orientation = rng.random(6) < 0.5 if orient == "mixed" else orient
    links = gadget_links(g, orientation)
    gval = float(rng.choice([G, 0.05, 0.3]))
    assert partition_number(g, gval, 3, orientation) == _partition_oracle(links, gval, 3)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_partition_number_monotone_in_subsets(seed):
    rng = np.random.default_rng(seed)
    g = gadget_gt(2, P3, copies=3)
    full = sorted(rng.choice(len(g) - 1, 10, replace=False).tolist())
    sub = full[: int(rng.integers(1, 10))]
    assert partition_number(g, G, 3, subset=sub) <= partition_number(g, G, 3, subset=full)


def test_partition_number_g2_lower_bound():
    g2 = gadget_gt(2, P3)
    # the long link plus the first eleven copy links
    assert partition_number(g2, G, 3, subset=list(range(12))) >= 3
