"""Orthogonally invariant measures on GL(n, R) and Lyapunov exponent estimators.

Two independent routes to the partial sums ``r_1 + ... + r_k`` of the random
Lyapunov exponents are provided: the QR cocycle along one long random
product, and the average of ``log|det A|_g|`` over A drawn from the measure
and g uniform on the Grassmannian. For orthogonally invariant measures the
two agree.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateMatrix
from .grassmann import haar_subspace_batch, invariant_topk_sum_batch, restriction_log_det_batch
from .linalg import DEGENERATE_TOL, RngStream, as_stream, haar_orthogonal_batch
from .montecarlo import DEFAULT_CHUNK, Estimate, mc_mean, mc_moments, summarize

__all__ = [
    "MeasureModel",
    "PointMass",
    "LeftHaarOrbit",
    "TwoSidedHaarOrbit",
    "LyapunovEstimate",
    "SupEstimate",
    "sample",
    "lyapunov_spectrum_qr",
    "topk_sum_grassmann",
    "mean_exponent_lhs",
    "sup_invariant_lhs",
    "grassmann_logplus",
]

REJECTION_FLAG_RATE = 1e-3


def _invertible(a: np.ndarray, what: str) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{what} must be square")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{what} has non-finite entries")
    sign, _ = np.linalg.slogdet(a)
    if sign == 0:
        raise DegenerateMatrix(f"{what} is singular")
    return a


class MeasureModel:
    """Base class: a probability measure on GL(n, R) that can be sampled."""

    n: int
    invariant: bool = True

    def sample_batch(self, size: int, rng: RngStream) -> np.ndarray:
        raise NotImplementedError

    def abs_log_det(self) -> float:
        """``log|det A|``, constant over the support for every model here."""
        raise NotImplementedError


@dataclass(frozen=True)
class PointMass(MeasureModel):
    """Dirac mass at A. Not orthogonally invariant."""

    a: np.ndarray
    invariant = False

    def __post_init__(self):
        object.__setattr__(self, "a", _invertible(self.a, "A"))

    @property
    def n(self):
        return self.a.shape[0]

    def sample_batch(self, size, rng=None):
        return np.broadcast_to(self.a, (size, self.n, self.n)).copy()

    def abs_log_det(self):
        return float(np.linalg.slogdet(self.a)[1])


@dataclass(frozen=True)
class LeftHaarOrbit(MeasureModel):
    """Law of ``U @ A0`` with U Haar on O(n)."""

    a0: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "a0", _invertible(self.a0, "A0"))

    @property
    def n(self):
        return self.a0.shape[0]

    def sample_batch(self, size, rng):
        return haar_orthogonal_batch(self.n, size, rng) @ self.a0

    def abs_log_det(self):
        return float(np.linalg.slogdet(self.a0)[1])


@dataclass(frozen=True)
class TwoSidedHaarOrbit(MeasureModel):
    """Law of ``U @ diag(d) @ V`` with U, V independent Haar on O(n)."""

    d: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.d, dtype=float)
        if d.ndim == 2:
            d = np.diag(d)
        if np.any(d <= 0) or not np.all(np.isfinite(d)):
            raise DegenerateMatrix("D must have strictly positive finite diagonal")
        object.__setattr__(self, "d", d)

    @property
    def n(self):
        return len(self.d)

    def sample_batch(self, size, rng):
        rng = as_stream(rng)
        u = haar_orthogonal_batch(self.n, size, rng)
        v = haar_orthogonal_batch(self.n, size, rng)
        return (u * self.d[None, None, :]) @ v

    def abs_log_det(self):
        return float(np.sum(np.log(self.d)))


def sample(model: MeasureModel, rng) -> np.ndarray:
    """One draw from ``model``."""
    return model.sample_batch(1, rng)[0]


@dataclass(frozen=True)
class LyapunovEstimate:
    r: np.ndarray
    stderr: np.ndarray
    m: int
    partial_stderr: np.ndarray

    def partial_sum(self, k: int) -> tuple[float, float]:
        """``(r_1 + ... + r_k, stderr)``; the stderr is from batch means of the partial sums."""
        return float(self.r[:k].sum()), float(self.partial_stderr[k - 1])


def lyapunov_spectrum_qr(model: MeasureModel, m: int, rng, *, nbatches: int = 20,
                         chunk: int = 4096) -> LyapunovEstimate:
    """Random Lyapunov exponents from the QR cocycle of an m-step product.

    The frame is re-orthonormalised after every factor. The standard error is
    from batch means over ``nbatches`` contiguous blocks of the trajectory.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    stream = as_stream(rng)
    n = model.n
    logs = np.empty((m, n))
    q = np.eye(n)
    t = 0
    for i, start in enumerate(range(0, m, chunk)):
        gs = model.sample_batch(min(chunk, m - start), stream.substream(i))
        for g in gs:
            qq, r = np.linalg.qr(g @ q)
            d = np.diagonal(r)
            ad = np.abs(d)
            if ad.min() < DEGENERATE_TOL:
                raise DegenerateMatrix("product lost rank")
            q = qq * np.sign(d)
            logs[t] = np.log(ad)
            t += 1
    r = logs.mean(axis=0)
    nb = min(nbatches, m)
    if nb >= 2:
        blocks = np.array_split(logs, nb)
        means = np.array([b.mean(axis=0) for b in blocks])
        csum = np.cumsum(means, axis=1)
        se = means.std(axis=0, ddof=1) / np.sqrt(nb)
        pse = csum.std(axis=0, ddof=1) / np.sqrt(nb)
    else:
        se = np.full(n, np.nan)
        pse = np.full(n, np.nan)
    return LyapunovEstimate(r, se, m, pse)


def _require_invariant(model, k):
    if not getattr(model, "invariant", False):
        raise ValueError("an orthogonally invariant model is required")
    if not 1 <= k <= model.n - 1:
        raise ValueError(f"need 1 <= k <= n-1, got k={k}")


def topk_sum_grassmann(model: MeasureModel, k: int, nsamples: int, rng, *,
                       workers: int = 1, chunk: int = DEFAULT_CHUNK) -> Estimate:
    """Monte Carlo of ``E log|det A|_g|`` with A from the model and g uniform on Gr(n, k)."""
    _require_invariant(model, k)

    def draw(size, s):
        a = model.sample_batch(size, s.substream(0))
        g = haar_subspace_batch(model.n, k, size, s.substream(1))
        return restriction_log_det_batch(a, g)

    return mc_mean(draw, nsamples, rng, chunk=chunk, workers=workers)


def grassmann_logplus(model: MeasureModel, k: int, nsamples: int, rng, *,
                      workers: int = 1, chunk: int = DEFAULT_CHUNK) -> Estimate:
    """Monte Carlo of ``E log+|det A|_g|`` (the right-hand side integrand)."""
    if not 1 <= k <= model.n - 1:
        raise ValueError(f"need 1 <= k <= n-1, got k={k}")

    def draw(size, s):
        a = model.sample_batch(size, s.substream(0))
        g = haar_subspace_batch(model.n, k, size, s.substream(1))
        return np.maximum(restriction_log_det_batch(a, g), 0.0)

    return mc_mean(draw, nsamples, rng, chunk=chunk, workers=workers)


def _topk_eig_sum(a: np.ndarray, k: int) -> np.ndarray:
    mod = np.abs(np.linalg.eigvals(a))
    if np.any(mod == 0):
        raise DegenerateMatrix("singular sample")
    logs = -np.sort(-np.log(mod), axis=-1)
    return logs[..., :k].sum(axis=-1)


def mean_exponent_lhs(model: MeasureModel, k: int, nsamples: int, rng, *,
                      workers: int = 1, chunk: int = DEFAULT_CHUNK) -> Estimate:
    """Monte Carlo of ``E (sum_{i<=k} log|lambda_i(A)|)^+``."""
    if not 1 <= k <= model.n:
        raise ValueError(f"need 1 <= k <= n, got k={k}")

    def draw(size, s):
        return np.maximum(_topk_eig_sum(model.sample_batch(size, s), k), 0.0)

    return mc_mean(draw, nsamples, rng, chunk=chunk, workers=workers)


class SupEstimate(NamedTuple):
    estimate: float
    stderr: float
    rejected: int
    total: int
    pointwise_violations: int

    @property
    def rejection_rate(self) -> float:
        return self.rejected / self.total if self.total else 0.0

    @property
    def flagged(self) -> bool:
        return self.rejection_rate > REJECTION_FLAG_RATE


def sup_invariant_lhs(model: MeasureModel, k: int, nsamples: int, rng, *,
                      workers: int = 1, chunk: int = DEFAULT_CHUNK) -> SupEstimate:
    """Monte Carlo of ``E sup_{A g = g} log+|det A|_g|``.

    Samples whose spectrum has a near-collision are discarded and counted.
    Along the way the pointwise bound ``(top-k eigen sum)^+ >= (invariant sum)^+``
    is checked exactly on every accepted sample; violations are counted.
    """
    if not 1 <= k <= model.n:
        raise ValueError(f"need 1 <= k <= n, got k={k}")

    def draw(size, s):
        a = model.sample_batch(size, s)
        value, attained, generic, topk = invariant_topk_sum_batch(a, k)
        plus = np.maximum(value, 0.0)
        viol = generic & (np.maximum(topk, 0.0) < plus)
        out = np.zeros((size, 3))
        out[:, 0] = np.where(generic, plus, 0.0)
        out[:, 1] = ~generic
        out[:, 2] = viol
        return out

    s, s2, cnt = mc_moments(draw, nsamples, rng, chunk=chunk, workers=workers)
    rejected = int(round(s[1]))
    kept = cnt - rejected
    mean, se = summarize(s[0], s2[0], kept)
    return SupEstimate(float(mean), float(se), rejected, int(cnt), int(round(s[2])))
