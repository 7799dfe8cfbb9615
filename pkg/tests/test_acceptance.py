"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Monte Carlo streams are fixed in advance by test name (see conftest), so
every run reproduces the same numbers.
"""
import itertools
import math
import time
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
import sympy as sp

from lyapmean.cli import random_sv_matrix
from lyapmean.jchar import j_exact, j_exact_from_squared, j_mc
from lyapmean.lyapunov import LeftHaarOrbit, PointMass, lyapunov_spectrum_qr, topk_sum_grassmann
from lyapmean.montecarlo import combined_sigma
from lyapmean.symfun import (
    F_mu,
    F_mu_mc_many,
    dominates,
    eval_monomial,
    eval_sympoly,
    jack_in_monomials,
    partitions,
    principal_specialization,
)
from lyapmean.verify import random_orbit_model, verify_main

from oracles import hall, to_power_sums


class _Check:
    def __init__(self):
        self.t0 = time.perf_counter()
        self.detail = ""

    def elapsed(self):
        return time.perf_counter() - self.t0


@contextmanager
def criterion(capsys, num, title):
    chk = _Check()
    ok = False
    try:
        yield chk
        ok = True
    finally:
        with capsys.disabled():
            status = "PASS" if ok else "FAIL"
            print(f"\n[criterion {num}] {status}: {title} ({chk.detail}; {chk.elapsed():.1f}s)")


def _rel_close(a, b, tol=1e-10):
    return abs(a - b) <= tol * max(1.0, abs(b))


def _z_or_exact(est, exact):
    """|z| for a Monte Carlo estimate; zero-variance integrands must match to rounding."""
    if est.stderr == 0:
        return 0.0 if _rel_close(est.estimate, exact, 1e-9) else math.inf
    return abs(est.estimate - exact) / est.stderr


# ------------------------------------------------------------------ 1


def test_criterion_1_golden_22(capsys, rng):
    with criterion(capsys, 1, "k=2, n-k=2 closed form, exact and float paths") as chk:
        g = rng.gen
        worst = 0.0
        for _ in range(20):
            a = [Fraction(int(g.integers(1, 10)), int(g.integers(1, 10))) for _ in range(2)]
            b = [Fraction(int(g.integers(1, 10)), int(g.integers(1, 10))) for _ in range(2)]
            c4 = (b[0] * b[1]) ** 2 / (a[0] * a[1]) ** 2
            exact = j_exact_from_squared([x * x for x in a], [x * x for x in b])
            assert exact.coeffs == (1, 0, 0, 0, c4)
            fl = j_exact(np.diag([float(x) for x in a]), np.diag([float(x) for x in b]))
            want = [1.0, 0.0, 0.0, 0.0, float(c4)]
            for c, w in zip(fl.coeffs, want):
                worst = max(worst, abs(c - w) / max(1.0, abs(w)))
        chk.detail = f"20 instances, worst float rel. error {worst:.1e}"
        assert worst <= 1e-10
        assert chk.elapsed() < 1.0


# ------------------------------------------------------------------ 2


def test_criterion_2_golden_62(capsys, rng):
    with criterion(capsys, 2, "k=2, n-k=4 coefficients") as chk:
        a = sp.symbols("a1:3", positive=True)
        b = sp.symbols("b1:5", positive=True)
        cp = j_exact_from_squared([x**2 for x in a], [x**2 for x in b])
        e2 = sum(b[i] ** 2 * b[j] ** 2 for i in range(4) for j in range(i + 1, 4))
        assert cp.coeffs[2] == 0 and cp.coeffs[6] == 0
        assert sp.simplify(cp.coeffs[8] - sp.prod(b) ** 2 / sp.prod(a) ** 4) == 0
        assert sp.simplify(cp.coeffs[4] - e2 / (6 * a[0] ** 2 * a[1] ** 2)) == 0
        worst = 0.0
        for i in range(20):
            s = rng.substream(i)
            b1, b2 = random_sv_matrix(2, 0.3, 3, s), random_sv_matrix(4, 0.3, 3, s)
            sa = np.linalg.svd(b1, compute_uv=False) ** 2
            sb = np.linalg.svd(b2, compute_uv=False) ** 2
            fl = j_exact(b1, b2)
            assert fl.coeffs[2] == 0 and fl.coeffs[6] == 0
            c8 = np.linalg.det(b2) ** 2 / np.linalg.det(b1) ** 4
            c4 = sum(sb[p] * sb[q] for p, q in itertools.combinations(range(4), 2)) / (6 * sa.prod())
            worst = max(worst, abs(fl.coeffs[8] - c8) / max(1, c8), abs(fl.coeffs[4] - c4) / max(1, c4))
        chk.detail = f"symbolic identity + 20 float instances, worst rel. error {worst:.1e}"
        assert worst <= 1e-10
        assert chk.elapsed() < 5.0


# ------------------------------------------------------------------ 3


def test_criterion_3_j_at_one(capsys, rng):
    with criterion(capsys, 3, "J(B1,B2;1) >= 1 and coefficient support") as chk:
        boxes = list(itertools.product((1, 2, 3), repeat=2))
        lowest = math.inf
        for i in range(200):
            k, p = boxes[i % len(boxes)]
            s = rng.substream(i)
            cp = j_exact(random_sv_matrix(k, 0.1, 10, s), random_sv_matrix(p, 0.1, 10, s))
            assert all(c >= 0 for c in cp.coeffs)
            assert all(c == 0 for j, c in enumerate(cp.coeffs) if j % 4)
            lowest = min(lowest, cp(1.0))
            assert cp(1.0) >= 1 - 1e-9
        chk.detail = f"200 instances over 9 box shapes, min J(1) = {lowest:.6g}"
        assert chk.elapsed() < 120


# ------------------------------------------------------------------ 4


def test_criterion_4_F_oracle(capsys, rng):
    with criterion(capsys, 4, "F_mu closed form vs Monte Carlo character average") as chk:
        zs = []
        for n in range(1, 5):
            mus = [tuple(2 * x for x in lam) for w in range(0, 5) for lam in partitions(w, n)]
            for i, d in enumerate(itertools.combinations_with_replacement([0.5, 1, 2, 3], n)):
                m = np.diag(d)
                ests = F_mu_mc_many(mus, m, 100_000, rng.substream(n * 100 + i))
                zs.extend((_z_or_exact(e, F_mu(mu, m)), d, mu) for mu, e in zip(mus, ests))
        bad = [(round(z, 2), d, mu) for z, d, mu in zs if z > 3]
        # calibration: with several hundred points, 3-sigma excursions are expected
        bonferroni = sp.sqrt(2) * sp.erfinv(1 - sp.Rational(1, 100) / len(zs))
        chk.detail = (f"{len(zs)} points, {len(bad)} beyond 3 sigma {bad}, "
                      f"max |z| {max(z for z, *_ in zs):.2f} vs 1%-Bonferroni {float(bonferroni):.2f}")
        assert not bad
        assert chk.elapsed() < 600


# ------------------------------------------------------------------ 5


def test_criterion_5_J_oracle(capsys, rng):
    with criterion(capsys, 5, "J exact vs Monte Carlo at u in {0.5, 1, 2}") as chk:
        zs = []
        for bi, (k, p) in enumerate(itertools.product((1, 2, 3), repeat=2)):
            for i in range(20):
                s = rng.substream(100 * bi + i)
                b1 = random_sv_matrix(k, 0.5, 2, s.substream(0))
                b2 = random_sv_matrix(p, 0.5, 2, s.substream(1))
                cp = j_exact(b1, b2)
                us = (0.5, 1.0, 2.0)
                for u, e in zip(us, j_mc(b1, b2, us, 100_000, s.substream(2))):
                    zs.append(_z_or_exact(e, cp(u)))
        chk.detail = f"{len(zs)} comparisons, max |z| {max(zs):.2f}"
        assert max(zs) <= 3
        assert chk.elapsed() < 600


# ------------------------------------------------------------------ 6


def test_criterion_6_jack_kernel(capsys):
    with criterion(capsys, 6, "Jack triangularity, orthogonality, principal specialization") as chk:
        # product formula validated first against a brute-force count
        assert principal_specialization((2,), 2, 2) == eval_monomial((2,), [1, 1]) + Fraction(2, 3) == Fraction(8, 3)
        assert eval_monomial((1, 1), [1] * 4) == 6
        npairs = nspec = 0
        for n in range(0, 7):
            ps = {}
            for lam in partitions(n):
                p = jack_in_monomials(lam, 2, max(n, 1))
                assert p.coeffs[lam] == 1 and all(dominates(lam, mu) for mu in p.coeffs)
                if n:
                    ps[lam] = to_power_sums(p, n)
                for nv in range(max(len(lam), 1), 6):
                    q = jack_in_monomials(lam, 2, nv)
                    assert eval_sympoly(q, [Fraction(1)] * nv) == principal_specialization(lam, 2, nv)
                    nspec += 1
            for a, b in itertools.combinations(ps, 2):
                assert hall(ps[a], ps[b], 2) == 0
                npairs += 1
        chk.detail = f"{npairs} orthogonal pairs, {nspec} specializations"
        assert chk.elapsed() < 60


# ------------------------------------------------------------------ 7


def test_criterion_7_point_mass(capsys, rng):
    with criterion(capsys, 7, "point-mass Lyapunov spectrum") as chk:
        est = lyapunov_spectrum_qr(PointMass(np.diag([2.0, 1.0, 0.5])), 10_000, rng)
        err = np.abs(est.r - [math.log(2), 0.0, -math.log(2)]).max()
        chk.detail = f"max error {err:.1e}"
        assert err <= 1e-4
        assert chk.elapsed() < 1.0


# ------------------------------------------------------------------ 8


def test_criterion_8_estimator_consistency(capsys, rng):
    with criterion(capsys, 8, "QR partial sums vs Grassmannian estimator") as chk:
        model = LeftHaarOrbit(np.diag([3.0, 1.0, 1 / 3]))
        est = lyapunov_spectrum_qr(model, 100_000, rng.substream(0))
        parts = []
        for k in (1, 2):
            s, se = est.partial_sum(k)
            g = topk_sum_grassmann(model, k, 100_000, rng.substream(k))
            z = abs(s - g.estimate) / combined_sigma(se, g.stderr)
            parts.append(f"k={k}: {s:.4f} vs {g.estimate:.4f} ({z:.2f} sigma)")
            assert z <= 3
        chk.detail = "; ".join(parts)
        assert chk.elapsed() < 60


# ------------------------------------------------------------------ 9


def test_criterion_9_main_inequality(capsys, rng):
    with criterion(capsys, 9, "Haar-form main inequality campaign") as chk:
        worst = math.inf
        rejected = total = violations = degenerate = 0
        for i in range(10):
            n = (2, 3, 4)[i % 3]
            model = random_orbit_model(n, rng.substream(i))
            for k in range(1, n):
                c = verify_main(model, k, 100_000, rng.substream(100 + 10 * i + k))
                assert c.lhs_sup >= c.rhs - 3 * c.sigma
                if c.sigma == 0 and c.margin == 0:
                    degenerate += 1  # log+ vanishes identically on both sides
                else:
                    worst = min(worst, c.margin_sigmas)
                rejected += c.rejected
                total += c.total
                violations += c.pointwise_violations
        assert total >= 10_000
        assert violations == 0
        assert rejected / total < 1e-3
        chk.detail = (f"min margin {worst:.1f} sigma, {degenerate} cases 0 = 0, {rejected}/{total} rejected, "
                      f"{violations} pointwise violations")
        assert chk.elapsed() < 600
