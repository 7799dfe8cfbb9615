"""Spherical polynomials of GL(N, R) / O(N) and orthogonal averages of characters.

For a partition mu with at most N parts, ``F_mu(M)`` is the Haar average over
O(N) of the character ``tr rho_mu(psi M)``. It vanishes unless every part of
mu is even, in which case it is the spherical polynomial ``phi_mu``: the
ratio of zonal (alpha = 2) Jack polynomials in the squared singular values,
normalised to 1 at the identity.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..errors import InvalidPoint, OddPartition
from ..linalg import haar_orthogonal_batch
from ..montecarlo import DEFAULT_CHUNK, Estimate, mc_moments, summarize
from .jack import eval_sympoly, jack_in_monomials, principal_specialization
from .partitions import Partition, is_even

__all__ = [
    "spherical_phi",
    "F_mu",
    "F_mu_from_squared",
    "schur_character",
    "schur_character_batch",
    "F_mu_mc",
    "F_mu_mc_many",
]

ZONAL = Fraction(2)


def spherical_phi(mu, svals_squared):
    """``P_{mu/2}^(2)(a) / P_{mu/2}^(2)(1^N)`` for even ``mu``.

    ``svals_squared`` may hold floats, Fractions or symbolic values; the
    result has the same arithmetic type.
    """
    mu = Partition(mu)
    if not is_even(mu):
        raise OddPartition(f"{tuple(mu)} has an odd part")
    a = list(svals_squared)
    n = len(a)
    for x in a:
        try:
            bad = float(x) <= 0
        except TypeError:  # symbolic input
            bad = False
        if bad:
            raise InvalidPoint("squared singular values must be positive")
    lam = mu.halve()
    p = jack_in_monomials(lam, ZONAL, n)
    return eval_sympoly(p, a) / principal_specialization(lam, ZONAL, n)


def F_mu_from_squared(mu, svals_squared):
    """``F_mu`` as a function of the squared singular values (0 for odd mu)."""
    mu = Partition(mu)
    if len(mu) > len(svals_squared):
        raise ValueError(f"{tuple(mu)} has more than {len(svals_squared)} parts")
    if not is_even(mu):
        return 0
    return spherical_phi(mu, svals_squared)


def F_mu(mu, m) -> float:
    """Haar average of ``tr rho_mu(psi M)`` over O(N), evaluated in closed form."""
    m = np.atleast_2d(np.asarray(m, dtype=float))
    a = np.linalg.svd(m, compute_uv=False) ** 2
    return float(F_mu_from_squared(mu, [float(x) for x in a]))


def _newton_h(p: list, top: int) -> list:
    """Complete homogeneous h_0..h_top from power sums p[1..top]."""
    h = [1]
    for k in range(1, top + 1):
        s = 0
        for i in range(1, k + 1):
            s = s + p[i] * h[k - i]
        h.append(Fraction(s, k) if isinstance(s, int) else s / k)
    return h


def _det(rows):
    """Determinant by fraction-free Gaussian elimination with pivoting (generic types)."""
    a = [list(r) for r in rows]
    n = len(a)
    sign = 1
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return 0 * det
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        det = det * a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            for cc in range(c, n):
                a[r][cc] = a[r][cc] - f * a[c][cc]
    return sign * det


def schur_character(mu, x):
    """``tr rho_mu(X)``: Jacobi-Trudi in complete symmetric functions of X's eigenvalues.

    The h's come from Newton's identities on ``p_j = tr X^j``. Exact when X
    is an object array of Fractions.
    """
    mu = Partition(mu)
    x = np.asarray(x)
    if x.dtype != object:
        x = x.astype(float)
    if not mu:
        return 1
    top = mu[0] + len(mu) - 1
    p = [None]
    power = x
    for _ in range(top):
        p.append(np.trace(power))
        power = power @ x
    h = _newton_h(p, top)
    ell = len(mu)

    def hh(i):
        return h[i] if i >= 0 else 0

    jt = [[hh(mu[i] - i + j) for j in range(ell)] for i in range(ell)]
    if x.dtype == object:
        return _det(jt)
    return float(np.linalg.det(np.array(jt, dtype=float)))


def _h_table_batch(xs: np.ndarray, top: int) -> np.ndarray:
    s = xs.shape[0]
    p = np.empty((s, top + 1))
    power = xs
    for j in range(1, top + 1):
        p[:, j] = np.trace(power, axis1=-2, axis2=-1)
        if j < top:
            power = power @ xs
    h = np.zeros((s, top + 1))
    h[:, 0] = 1.0
    for k in range(1, top + 1):
        h[:, k] = sum(p[:, i] * h[:, k - i] for i in range(1, k + 1)) / k
    return h


def _jt_from_table(mu: Partition, h: np.ndarray) -> np.ndarray:
    if not mu:
        return np.ones(h.shape[0])
    ell = len(mu)
    mat = np.zeros((h.shape[0], ell, ell))
    for i in range(ell):
        for j in range(ell):
            idx = mu[i] - i + j
            if idx >= 0:
                mat[:, i, j] = h[:, idx]
    return np.linalg.det(mat)


def schur_character_batch(mus, xs: np.ndarray) -> np.ndarray:
    """Characters for several partitions on a stack of matrices, shape (S, len(mus))."""
    mus = [Partition(m) for m in mus]
    top = max((m[0] + len(m) - 1 for m in mus if m), default=0)
    h = _h_table_batch(xs, max(top, 1))
    return np.stack([_jt_from_table(m, h) for m in mus], axis=-1)


def F_mu_mc_many(mus, m, nsamples: int, rng, *, chunk: int = DEFAULT_CHUNK,
                 workers: int = 1) -> list[Estimate]:
    """Monte Carlo Haar averages of ``tr rho_mu(psi M)`` for several mu, sharing samples."""
    m = np.atleast_2d(np.asarray(m, dtype=float))
    n = m.shape[0]
    mus = [Partition(mu) for mu in mus]
    for mu in mus:
        if len(mu) > n:
            raise ValueError(f"{tuple(mu)} has more than {n} parts")

    def draw(size, s):
        return schur_character_batch(mus, haar_orthogonal_batch(n, size, s) @ m)

    s, s2, cnt = mc_moments(draw, nsamples, rng, chunk=chunk, workers=workers)
    mean, se = summarize(s, s2, cnt)
    return [Estimate(float(a), float(b), int(cnt)) for a, b in zip(mean, se)]


def F_mu_mc(mu, m, nsamples: int, rng, **kw) -> Estimate:
    """Independent Monte Carlo oracle for :func:`F_mu`."""
    return F_mu_mc_many([mu], m, nsamples, rng, **kw)[0]
