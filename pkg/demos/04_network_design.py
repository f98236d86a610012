# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: light
# ---

# # Fault-tolerant structures
#
# Two ways to go beyond a single tree: add an MST over the tree's leaves
# to survive any one node failure, or stack k+1 edge-disjoint spanning
# trees to survive any k-1 link failures.

# +
from sinrconn.geometry import euclidean_mst, orient
from sinrconn.instances import gen_uniform
from sinrconn.netdesign import (
    biconnect_links,
    biconnect_structure,
    k_edge_structure,
    verify_bi_connectivity,
    verify_k_edge_strong,
)
from sinrconn.scheduler import connect
from sinrconn.sinr import SinrParams

params = SinrParams()
pts = gen_uniform(64, seed=4).points
base = len(connect(orient(euclidean_mst(pts), 0, "toward"), params))
print("single tree, one direction:", base, "slots")
# -

# ## Surviving a node failure

# +
tree, extra, links = biconnect_links(pts)
sched = biconnect_structure(pts, params)
print(f"{len(tree.edges)} tree edges + {len(extra)} leaf edges, both directions -> {len(links)} links")
print("slots:", len(sched), " biconnected:", verify_bi_connectivity(sched.links(), len(pts)))
# -

# ## Surviving link failures
#
# Each extra tree costs another pair of schedules, and later trees are
# longer because the short edges are taken.

# +
for k in (1, 2, 3):
    trees, schedules = k_edge_structure(pts, params, k)
    total = sum(len(s) for s in schedules)
    ok = verify_k_edge_strong([l for s in schedules for l in s.links()], k, len(pts))
    weights = [round(t.weight(), 2) for t in trees]
    print(f"k={k}  tree weights {weights}  slots {total} ({total / base:.1f}x one tree)  k-edge verified {ok}")
