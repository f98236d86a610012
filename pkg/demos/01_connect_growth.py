# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: light
# ---

# # How many slots does a spanning tree need?
#
# We scatter points in the unit square, take the Euclidean MST, orient
# every edge toward point 0, and ask the greedy scheduler for a sequence
# of SINR-feasible slots. The slot count grows with n, but slowly.

# +
import math

import numpy as np

from sinrconn.geometry import euclidean_mst, orient
from sinrconn.instances import gen_uniform
from sinrconn.scheduler import connect
from sinrconn.sinr import SinrParams, gamma, is_feasible

params = SinrParams(alpha=3.0, beta=1.0, noise=0.0)
print("gamma =", gamma(params), "= 1 /", round(1 / gamma(params)))
# -

# One instance first. Every slot carries its own power vector and is
# checked against the SINR inequality directly.

# +
pts = gen_uniform(256, seed=0).points
links = orient(euclidean_mst(pts), 0, "toward")
sched = connect(links, params)
sizes = [len(s) for s in sched.slots]
print(f"{len(links)} links in {len(sched)} slots; largest slot {max(sizes)}, smallest {min(sizes)}")
print("all slots feasible:", all(is_feasible(s.links, s.powers, params).passed for s in sched.slots))
# -

# The first slots are crowded and the tail is thin: the long MST edges
# near the top of the length order interfere with almost everything.

# +
slot_powers = [max(s.powers.values()) / min(s.powers.values()) for s in sched.slots[:5]]
print("power spread in the first slots:", np.round(slot_powers, 1))
# -

# Now the growth. Doubling n twice should add a roughly constant number
# of slots each time if the count is logarithmic.

# +
for n in (64, 256, 1024):
    counts = [len(connect(orient(euclidean_mst(gen_uniform(n, s).points), 0, "toward"), params)) for s in range(5)]
    med = float(np.median(counts))
    print(f"n={n:5d}  median slots {med:6.1f}  per log2 n {med / math.log2(n):5.2f}")
