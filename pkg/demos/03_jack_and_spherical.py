"""
Zonal polynomials and orthogonal averages
=========================================

Jack polynomials at alpha = 2 computed exactly, and the spherical
functions they produce, checked against a Monte Carlo average of
characters over O(N).
"""

from fractions import Fraction

import numpy as np

from lyapmean import RngStream
from lyapmean.symfun import F_mu, F_mu_mc_many, format_sympoly, jack_in_monomials, principal_specialization

# exact monomial expansions
for lam in [(2,), (2, 1), (3, 1), (2, 2)]:
    print(f"P{list(lam)} =", format_sympoly(jack_in_monomials(lam, 2, 4)))

# the value at (1, ..., 1) has a product formula
print("P[2](1,1)       =", principal_specialization((2,), 2, 2))
print("P[3,1](1^4)     =", principal_specialization((3, 1), 2, 4))
print("alpha = 1/3     :", format_sympoly(jack_in_monomials((2, 1), Fraction(1, 3), 3)))

# average of tr rho_mu(psi M) over Haar psi: zero for odd mu, spherical otherwise
m = np.diag([2.0, 0.5, 1.0])
mus = [(2,), (1, 1), (3,), (2, 2), (4, 2)]
ests = F_mu_mc_many(mus, m, 100_000, RngStream(11))
for mu, e in zip(mus, ests):
    print(f"F{list(mu)}: exact {F_mu(mu, m):9.5f}   MC {e.estimate:9.5f} +- {e.stderr:.5f}")
