# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: light
# ---

# # Three instances that resist scheduling
#
# Each construction here is a handful of points on a line, arranged so
# that some restriction on the schedule (the gamma condition, symmetric
# powers, length-only powers) forces one link per slot.

# +
import itertools

import numpy as np

from sinrconn.bidirectional import Pair, symmetric_conflict_certificate, symmetric_lb_instance
from sinrconn.geometry import euclidean_mst, make_link
from sinrconn.instances import gadget_g1, gadget_gt, partition_number, rho
from sinrconn.oblivious import PowerFunction, oblivious_lb_instance, pairwise_oblivious_conflict
from sinrconn.scheduler import min_slots_bruteforce
from sinrconn.sinr import SinrParams, gamma

P3 = SinrParams()
# -

# ## The line gadget
#
# G1 has four links with gaps 28, 2, 4, 8. Under the gamma condition no
# two of them can share a part.

# +
g1 = gadget_g1()
print("G1:", [int(c) for c in g1.coords], "rho =", rho(g1, 3), "= 1/3375")
print("partition number:", partition_number(g1, gamma(P3), 3))
# -

# The next level glues thousands of rescaled copies behind one long link.
# Exhaustive search over all 10669 links is out of reach, but any subset
# gives a lower bound because dropping links never adds parts.

# +
g2 = gadget_gt(2, P3)
print(len(g2), "points;", "partition number of the first 12 links:", partition_number(g2, gamma(P3), 3, subset=range(12)))
# -

# ## Symmetric bidirectional pairs
#
# With equal power in both directions, every pair of MST edges here has
# a conflict certificate above 1, whatever powers are chosen.

# +
pts = symmetric_lb_instance(6)
print("points:", pts[:, 0].tolist())
pairs = [Pair.from_points(pts, i, j) for i, j in euclidean_mst(pts).edges]
certs = [symmetric_conflict_certificate(a, b, 3) for a, b in itertools.combinations(pairs, 2)]
print("smallest certificate:", round(min(certs), 2))
print("slots needed with mean power:", min_slots_bruteforce(pairs, P3, lambda x: x**1.5))
# -

# ## Length-only powers
#
# For a smooth power function p the chain below grows so fast that every
# pair of links conflicts under p. The coordinates get large quickly.

# +
params4 = SinrParams(4.0)
for p in (PowerFunction("mean", 4.0), PowerFunction("exponent", 4.0, 3.0)):
    xs = oblivious_lb_instance(6, p)
    links = [make_link(xs, i, i + 1) for i in range(5)]
    every = all(pairwise_oblivious_conflict(a, b, p, params4) for a, b in itertools.combinations(links, 2))
    print(f"{p.label():14s} last x {xs[-1, 0]:.3g}  all pairs conflict {every}  slots {min_slots_bruteforce(links, params4, p)}")
