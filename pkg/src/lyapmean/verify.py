"""Checks of the main inequality in its Haar-probability form.

For an orthogonally invariant model and ``1 <= k <= n-1``::

    E sup_{A g = g} log+|det A|_g|  >=  (1 / C(n, k)) E_{A, g} log+|det A|_g|

together with the pointwise bound that links the left side to the
eigenvalue form ``E (sum_{i<=k} log|lambda_i|)^+``, the Jensen step
``(r_1 + ... + r_k)^+ <= E log+|det A|_g|``, and the determinant-one
corollary.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import as_stream, haar_orthogonal_batch
from .lyapunov import (
    LeftHaarOrbit,
    MeasureModel,
    TwoSidedHaarOrbit,
    grassmann_logplus,
    mean_exponent_lhs,
    sup_invariant_lhs,
    topk_sum_grassmann,
    _topk_eig_sum,
)
from .montecarlo import combined_sigma

__all__ = [
    "verdict",
    "MainCheck",
    "verify_main",
    "jensen_check",
    "random_orbit_model",
    "sl_corollary_check",
]

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"
Verdict = str
ROUNDING = 1e-12


def verdict(margin: float, sigma: float, nsigma: float = 3.0) -> Verdict:
    """Tri-state verdict for a claim ``margin >= 0`` measured with error ``sigma``."""
    if margin < -nsigma * sigma - ROUNDING:
        return FAIL
    if margin > nsigma * sigma or (sigma == 0 and margin >= -ROUNDING):
        return PASS
    return INCONCLUSIVE


@dataclass
class MainCheck:
    n: int
    k: int
    lhs_sup: float
    lhs_sup_se: float
    lhs_eigen: float
    lhs_eigen_se: float
    rhs: float
    rhs_se: float
    rejected: int
    total: int
    pointwise_violations: int
    extra: dict = field(default_factory=dict)

    @property
    def margin(self) -> float:
        return self.lhs_sup - self.rhs

    @property
    def sigma(self) -> float:
        return combined_sigma(self.lhs_sup_se, self.rhs_se)

    @property
    def margin_sigmas(self) -> float:
        if self.sigma > 0:
            return self.margin / self.sigma
        return 0.0 if self.margin == 0 else math.copysign(math.inf, self.margin)

    @property
    def verdict(self) -> Verdict:
        return verdict(self.margin, self.sigma)

    @property
    def holds_within_3sigma(self) -> bool:
        return self.verdict != FAIL

    @property
    def rejection_rate(self) -> float:
        return self.rejected / self.total if self.total else 0.0


def verify_main(model: MeasureModel, k: int, nsamples: int, rng, *, workers: int = 1) -> MainCheck:
    """Estimate both sides of the Haar-form inequality for one model and k."""
    stream = as_stream(rng)
    n = model.n
    sup = sup_invariant_lhs(model, k, nsamples, stream.substream(0), workers=workers)
    eig = mean_exponent_lhs(model, k, nsamples, stream.substream(1), workers=workers)
    plus = grassmann_logplus(model, k, nsamples, stream.substream(2), workers=workers)
    c = math.comb(n, k)
    return MainCheck(
        n=n, k=k,
        lhs_sup=sup.estimate, lhs_sup_se=sup.stderr,
        lhs_eigen=eig.estimate, lhs_eigen_se=eig.stderr,
        rhs=plus.estimate / c, rhs_se=plus.stderr / c,
        rejected=sup.rejected, total=sup.total,
        pointwise_violations=sup.pointwise_violations,
        extra={"grassmann_logplus": plus.estimate, "grassmann_logplus_se": plus.stderr},
    )


def jensen_check(model: MeasureModel, k: int, nsamples: int, rng) -> tuple[float, float, Verdict]:
    """``E log+|det A|_g| - (E log|det A|_g|)^+`` with its sigma and verdict."""
    stream = as_stream(rng)
    s = topk_sum_grassmann(model, k, nsamples, stream.substream(0))
    p = grassmann_logplus(model, k, nsamples, stream.substream(1))
    margin = p.estimate - max(s.estimate, 0.0)
    sigma = combined_sigma(s.stderr, p.stderr)
    return margin, sigma, verdict(margin, sigma)


def random_orbit_model(n: int, rng, *, kind: str | None = None, sv_range=(0.2, 5.0),
                       unit_det: bool = False) -> MeasureModel:
    """A random left or two-sided Haar orbit with log-uniform singular values."""
    g = as_stream(rng).gen
    lo, hi = np.log(sv_range[0]), np.log(sv_range[1])
    d = np.exp(g.uniform(lo, hi, n))
    if unit_det:
        d = d / np.exp(np.mean(np.log(d)))
    kind = kind or ("left" if g.random() < 0.5 else "two")
    if kind == "two":
        return TwoSidedHaarOrbit(d)
    v = haar_orthogonal_batch(n, 1, as_stream(rng).substream(7))[0]
    return LeftHaarOrbit(d[:, None] * v)


def sl_corollary_check(model: MeasureModel, nsamples: int, rng, *, tol: float = 1e-12):
    """Per-sample check that ``sum_{i<=k} log|lambda_i| >= 0`` for every k when |det| = 1.

    Returns ``(violations, checked, min_value)``; ``tol`` absorbs rounding
    in sums that are exactly zero in exact arithmetic.
    """
    if abs(model.abs_log_det()) > 1e-10:
        raise ValueError("model must have |det| = 1")
    a = model.sample_batch(nsamples, as_stream(rng))
    mins = np.min(np.stack([_topk_eig_sum(a, k) for k in range(1, model.n + 1)], axis=-1), axis=-1)
    return int(np.sum(mins < -tol)), int(nsamples * model.n), float(mins.min())
