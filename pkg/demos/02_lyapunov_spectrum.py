"""
Lyapunov exponents of random products
=====================================

Two estimators of the exponents of an i.i.d. product A_m ... A_1 where
each factor is a random rotation of a fixed matrix.
"""

import numpy as np

from lyapmean import LeftHaarOrbit, PointMass, RngStream, lyapunov_spectrum_qr, topk_sum_grassmann

rng = RngStream(7)

# a single fixed matrix: the exponents are the log-moduli of its eigenvalues
est = lyapunov_spectrum_qr(PointMass(np.diag([2.0, 1.0, 0.5])), 10_000, rng.substream(0))
print("point mass r     :", est.r.round(6), " log 2 =", round(np.log(2), 6))

# randomise with a Haar rotation on the left; the spread between exponents shrinks
model = LeftHaarOrbit(np.diag([3.0, 1.0, 1 / 3]))
est = lyapunov_spectrum_qr(model, 50_000, rng.substream(1))
print("rotated r        :", est.r.round(4), "+-", est.stderr.round(4))

# partial sums also equal an average over random k-planes
for k in (1, 2):
    s, se = est.partial_sum(k)
    g = topk_sum_grassmann(model, k, 50_000, rng.substream(2 + k))
    print(f"k={k}  QR {s:.4f} +- {se:.4f}   Grassmann {g.estimate:.4f} +- {g.stderr:.4f}")

# the exponents always add up to E log|det A|
print("sum r - log|det| :", est.r.sum() - model.abs_log_det())
