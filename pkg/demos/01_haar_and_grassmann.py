"""
Haar rotations and random subspaces
===================================

Draw orthogonal matrices from Haar measure, turn them into random
k-planes, and look at how a fixed matrix stretches those planes.
"""

import numpy as np

from lyapmean import RngStream, haar_orthogonal_batch, haar_subspace_batch, restriction_log_det_batch

rng = RngStream(2026)

# a batch of 3x3 rotations; Q^T Q = I and det = +-1 with equal odds
qs = haar_orthogonal_batch(3, 20_000, rng.substream(0))
print("max |Q^T Q - I|  :", np.abs(qs.transpose(0, 2, 1) @ qs - np.eye(3)).max())
print("fraction det > 0 :", np.mean(np.linalg.det(qs) > 0))

# Haar rotations are uniform: the mean of each entry is 0, its variance 1/n
print("entry variance   :", qs.var(axis=0).round(3).tolist())

# random 2-planes in R^4 and the log volume factor of A on each one
a = np.diag([3.0, 2.0, 1.0, 0.5])
frames = haar_subspace_batch(4, 2, 20_000, rng.substream(1))
logs = restriction_log_det_batch(a, frames)
print("E log|det A|_g|  :", logs.mean().round(4))

# the largest value is reached on the plane of the two top singular directions
print("max over samples :", logs.max().round(4), " bound:", np.log(6).round(4))
