"""
Averaged characteristic polynomials
===================================

J(B1, B2; u) is the Haar average of det(I - u (psi2 B2) (x) (psi1 B1)^-T).
Its coefficients are sums of products of spherical functions, only
degrees divisible by 4 survive, and J(1) never drops below 1.
"""

import numpy as np
import sympy as sp

from lyapmean import RngStream, j_exact, j_exact_from_squared, j_mc
from lyapmean.cli import random_sv_matrix

# symbolic 2 + 2 case
a = sp.symbols("a1 a2", positive=True)
b = sp.symbols("b1 b2", positive=True)
cp = j_exact_from_squared([x**2 for x in a], [x**2 for x in b])
print("2+2 coefficients:", [sp.simplify(c) for c in cp.coeffs])

# 2 + 4 case: c4 is a normalised second elementary function of the b_i^2
b4 = sp.symbols("b1:5", positive=True)
cp = j_exact_from_squared([x**2 for x in a], [x**2 for x in b4])
print("2+4 c4          :", sp.factor(cp.coeffs[4]))
print("2+4 c8          :", sp.factor(cp.coeffs[8]))

# a numeric pair: exact polynomial against direct sampling
rng = RngStream(3)
b1, b2 = random_sv_matrix(2, 0.5, 2, rng.substream(0)), random_sv_matrix(3, 0.5, 2, rng.substream(1))
cp = j_exact(b1, b2)
us = [0.5, 1.0, 2.0]
for u, e in zip(us, j_mc(b1, b2, us, 100_000, rng.substream(2))):
    print(f"u={u}: exact {cp(u):.5f}   MC {e.estimate:.5f} +- {e.stderr:.5f}")

# J(1) >= 1 over many random shapes
worst = min(
    j_exact(random_sv_matrix(k, 0.1, 10, rng.substream(10 + i)),
            random_sv_matrix(p, 0.1, 10, rng.substream(50 + i)))(1.0)
    for i, (k, p) in enumerate([(1, 1), (1, 3), (2, 2), (2, 3), (3, 3)] * 4)
)
print("min J(1)        :", round(worst, 6))
