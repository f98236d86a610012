# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: light
# ---

# # Aggregating to a single sink
#
# Every round pairs each surviving point with its nearest survivor,
# schedules one feasible slot from that forest, and retires the senders.
# If a fixed fraction drops out each round, latency is logarithmic; the
# interesting question at desk scale is how small that fraction is.

# +
import math

from sinrconn.aggregation import latency_lower_bound, mlas, verify_aggregation
from sinrconn.instances import gen_uniform
from sinrconn.sinr import SinrParams

params = SinrParams()
sched = mlas(gen_uniform(256, seed=2).points, params)
print("sink:", sched.sink, " latency:", sched.latency, " lower bound:", latency_lower_bound(256))
print("survivors per round:", sched.active_sizes[:12], "...")
# -

# The verifier rebuilds the tree from the slots and checks feasibility,
# the single root, and that each link fires after everything below it.

# +
rep = verify_aggregation(sched, params)
print("feasible", rep.feasible, " arborescence", rep.arborescence, " ordering", rep.ordering)
print("worst survivor ratio:", round(rep.max_shrink, 3))
# -

# Each round retires only about one survivor in seventy, so the
# logarithm's constant is large and latency per log2 n still climbs over
# this range of n.

# +
for n in (32, 128, 512):
    lat = [mlas(gen_uniform(n, s).points, params).latency for s in range(5)]
    print(f"n={n:4d}  latency {lat}  per log2 n {max(lat) / math.log2(n):.1f}")
