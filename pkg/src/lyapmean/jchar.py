"""Haar-averaged characteristic polynomial of the Kronecker operator.

For ``B1`` in GL(k) and ``B2`` in GL(n-k)::

    J(B1, B2; u) = E det(Id - u (psi2 B2) (x) (psi1 B1)^{-T})

with psi1, psi2 independent Haar on O(k) and O(n-k). Expanding the
determinant into exterior powers and those into pairs of Schur functors of
conjugate shapes gives the exact coefficients

    c_j = (-1)^j sum_{|lam| = j, lam in k x (n-k) box} F_{lam'}(B2) F_lam(B1^{-1}).

Only shapes with lam and lam' both even contribute, so ``c_j = 0`` unless 4
divides j. The second factor is evaluated at the inverse of B1 because the
operator contains ``(psi1 B1)^{-1}``; the Monte Carlo estimator
:func:`j_mc` is the arbiter for this (see the tests), and the alternative
``b1_argument="direct"`` is kept only so that check can be rerun.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMatrix
from .grassmann import induced_chart_derivative
from .linalg import RngStream, as_stream, haar_orthogonal_batch, kron_operator_batch
from .montecarlo import DEFAULT_CHUNK, Estimate, mc_moments, summarize
from .symfun.partitions import conjugate, is_even, partitions_in_box
from .symfun.spherical import F_mu_from_squared

__all__ = [
    "CharPolyJ",
    "contributing_shapes",
    "j_exact",
    "j_exact_from_squared",
    "j_mc",
    "j_mc_chart",
    "j_at_one_check",
]


@dataclass(frozen=True)
class CharPolyJ:
    """Coefficients ``c_0 .. c_{k(n-k)}`` of ``J(u) = sum_j c_j u^j``."""

    k: int
    n_minus_k: int
    coeffs: tuple

    def __call__(self, u):
        total = 0
        for j, c in enumerate(self.coeffs):
            total = total + c * u**j
        return total

    @property
    def degree(self) -> int:
        return self.k * self.n_minus_k


def contributing_shapes(k: int, n_minus_k: int):
    """Shapes in the k x (n-k) box whose parts and conjugate parts are all even."""
    out = []
    for j in range(0, k * n_minus_k + 1):
        for lam in partitions_in_box(j, k, n_minus_k):
            if is_even(lam) and is_even(conjugate(lam)):
                out.append(lam)
    return out


def j_exact_from_squared(a_sq, b_sq, *, b1_argument: str = "inverse") -> CharPolyJ:
    """Exact coefficients from squared singular values of B1 (``a_sq``) and B2 (``b_sq``).

    Arithmetic follows the input type: Fractions give exact rationals,
    sympy symbols give symbolic coefficients, floats give floats.
    """
    a_sq, b_sq = list(a_sq), list(b_sq)
    k, p = len(a_sq), len(b_sq)
    if b1_argument == "inverse":
        a_arg = [1 / x for x in a_sq]
    elif b1_argument == "direct":
        a_arg = a_sq
    else:
        raise ValueError("b1_argument must be 'inverse' or 'direct'")
    coeffs = [0] * (k * p + 1)
    coeffs[0] = 1
    for lam in contributing_shapes(k, p):
        j = sum(lam)
        if j == 0:
            continue
        term = F_mu_from_squared(conjugate(lam), b_sq) * F_mu_from_squared(lam, a_arg)
        coeffs[j] = coeffs[j] + (-1) ** j * term
    return CharPolyJ(k, p, tuple(coeffs))


def _squared_svals(b) -> list:
    b = np.atleast_2d(np.asarray(b, dtype=float))
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise ValueError("square matrix required")
    s = np.linalg.svd(b, compute_uv=False)
    if s[-1] <= 1e-300 * max(s[0], 1.0):
        raise DegenerateMatrix("matrix is singular")
    return [float(x) for x in s**2]


def j_exact(b1, b2, *, b1_argument: str = "inverse") -> CharPolyJ:
    """Exact (float-valued) coefficients of ``J(B1, B2; u)``."""
    cp = j_exact_from_squared(_squared_svals(b1), _squared_svals(b2), b1_argument=b1_argument)
    return CharPolyJ(cp.k, cp.n_minus_k, tuple(float(c) for c in cp.coeffs))


def j_mc(b1, b2, u, nsamples: int, rng, *, chunk: int = DEFAULT_CHUNK,
         workers: int = 1):
    """Monte Carlo of ``J(B1, B2; u)`` by dense determinants of the Kronecker operator.

    ``u`` may be a scalar (returns one :class:`Estimate`) or a sequence
    (returns a list, all values sharing the same Haar samples).
    """
    b1 = np.atleast_2d(np.asarray(b1, dtype=float))
    b2 = np.atleast_2d(np.asarray(b2, dtype=float))
    _squared_svals(b1)
    scalar = np.ndim(u) == 0
    us = np.atleast_1d(np.asarray(u, dtype=float))
    k, p = b1.shape[0], b2.shape[0]
    eye = np.eye(k * p)

    def draw(size, s):
        psi1 = haar_orthogonal_batch(k, size, s.substream(0))
        psi2 = haar_orthogonal_batch(p, size, s.substream(1))
        t = kron_operator_batch(psi2 @ b2, psi1 @ b1)
        return np.stack([np.linalg.det(eye - x * t) for x in us], axis=-1)

    s, s2, cnt = mc_moments(draw, nsamples, rng, chunk=chunk, workers=workers)
    mean, se = summarize(s, s2, cnt)
    out = [Estimate(float(a), float(b), int(cnt)) for a, b in zip(mean, se)]
    return out[0] if scalar else out


def j_mc_chart(b1, b2, nsamples: int, rng) -> Estimate:
    """``J(B1, B2; 1)`` through the Grassmannian chart derivative.

    Each sample builds ``B = [[psi1 B1, *], [0, psi2 B2]]`` (random upper
    block) on R^n, takes g = span(e_1..e_k), which B fixes, and averages the
    signed ``det(Id - DL_B(g))``. Slow (one chart derivative per sample);
    meant as a cross-check of :func:`j_mc`.
    """
    b1 = np.atleast_2d(np.asarray(b1, dtype=float))
    b2 = np.atleast_2d(np.asarray(b2, dtype=float))
    k, p = b1.shape[0], b2.shape[0]
    n = k + p
    stream = as_stream(rng)
    psi1 = haar_orthogonal_batch(k, nsamples, stream.substream(0))
    psi2 = haar_orthogonal_batch(p, nsamples, stream.substream(1))
    star = stream.substream(2).gen.standard_normal((nsamples, k, p))
    g = np.eye(n)[:, :k]
    vals = np.empty(nsamples)
    for i in range(nsamples):
        b = np.zeros((n, n))
        b[:k, :k] = psi1[i] @ b1
        b[:k, k:] = star[i]
        b[k:, k:] = psi2[i] @ b2
        d = induced_chart_derivative(b, g)
        vals[i] = np.linalg.det(np.eye(k * p) - d)
    mean, se = summarize(vals.sum(), (vals * vals).sum(), nsamples)
    return Estimate(float(mean), float(se), nsamples)


def j_at_one_check(b1, b2, *, tol: float = 1e-9) -> tuple[float, bool]:
    """``(J(B1, B2; 1), J(B1, B2; 1) >= 1 - tol)``."""
    value = float(sum(j_exact(b1, b2).coeffs))
    return value, value >= 1 - tol
