"""Regression constants measured once on seeded instances (alpha=3, beta=1, N=0).

Each value is the measured worst case rounded up a little; the
measurement is described next to it.
"""

# max over seeds 0..19 of connect slots / log2(n), n in {64, 256, 1024}: 9.8
CONNECT_C = 10.5

# max over seeds 0..19 of mlas latency / log2(n), n in {64, 256}: 12.0
MLAS_C = 12.5

# max |P_{i+1}| / |P_i| over all rounds, seeds 0..49, n in {64, 256}: 0.986
MLAS_SHRINK = 0.99

# max over t in 1..10 of len(annulus_cover(t, 0.25)) / t: 627 (attained at t=1)
ANNULUS_K = 627

# max over seeds 0..2 of k-edge slots / connect slots / (k+1)^3,
# k in 1..3, n in {48, 128, 256}: 0.673 (n=128, k=1)
KEDGE_C = 0.7
