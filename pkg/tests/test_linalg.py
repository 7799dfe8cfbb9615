import mpmath
import numpy as np
import pytest
import sympy as sp
from scipy import stats

from lyapmean.errors import DegenerateMatrix
from lyapmean.linalg import (
    RngStream,
    eig_log_moduli,
    haar_orthogonal,
    haar_orthogonal_batch,
    kron_operator,
    qr_positive,
)

from conftest import random_gl


def test_streams_reproducible_and_distinct():
    a = RngStream(7, 3).gen.standard_normal(5)
    b = RngStream(7, 3).gen.standard_normal(5)
    c = RngStream(7, 4).gen.standard_normal(5)
    assert np.array_equal(a, b)
    assert not np.allclose(a, c)
    s = RngStream(7, 3)
    assert np.array_equal(s.substream(1).gen.random(3), RngStream(7, 3).substream(1).gen.random(3))


def test_haar_n1_is_plus_minus_one(rng):
    u = haar_orthogonal_batch(1, 20000, rng)[:, 0, 0]
    assert set(np.unique(u)) == {-1.0, 1.0}
    # binomial(20000, 1/2): 3 sigma is ~212
    assert abs(np.sum(u > 0) - 10000) < 3 * np.sqrt(20000 / 4)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_haar_orthogonal_and_det(n, rng):
    us = haar_orthogonal_batch(n, 10000, rng)
    err = np.abs(np.swapaxes(us, 1, 2) @ us - np.eye(n)).max()
    assert err <= 1e-12
    d = np.linalg.det(us)
    assert np.all(np.abs(np.abs(d) - 1) <= 1e-10)
    assert abs(np.mean(d > 0) - 0.5) <= 3 * np.sqrt(0.25 / len(d))


def test_haar_moments_n4(rng):
    # column 1 is uniform on S^3, so E U11 = 0 and E U11^2 = 1/4
    u11 = haar_orthogonal_batch(4, 100000, rng)[:, 0, 0]
    n = len(u11)
    assert abs(u11.mean()) <= 3 * u11.std() / np.sqrt(n)
    sq = u11**2
    assert abs(sq.mean() - 0.25) <= 3 * sq.std() / np.sqrt(n)


def test_haar_left_invariance_ks(rng):
    n = 3
    v = haar_orthogonal(n, rng.substream(0))
    a = np.trace(haar_orthogonal_batch(n, 10000, rng.substream(1)), axis1=1, axis2=2)
    b = np.trace(v @ haar_orthogonal_batch(n, 10000, rng.substream(2)), axis1=1, axis2=2)
    res = stats.ks_2samp(a, b)
    crit = 1.628 * np.sqrt(2 / 10000)  # two-sample KS critical value at 1%
    assert res.statistic < crit


def test_qr_positive_examples():
    q, r = qr_positive(np.eye(3))
    assert np.allclose(q, np.eye(3)) and np.allclose(r, np.eye(3))
    q, r = qr_positive(np.diag([2.0, 3.0]))
    assert np.allclose(q, np.eye(2)) and np.allclose(r, np.diag([2.0, 3.0]))


def test_qr_positive_reconstruction_and_determinism(rng):
    m = rng.gen.standard_normal((5, 5))
    q, r = qr_positive(m)
    assert np.abs(q @ r - m).max() <= 1e-10 * np.abs(m).max()
    assert np.abs(q.T @ q - np.eye(5)).max() <= 1e-12
    assert np.all(np.diag(r) > 0)
    assert np.allclose(np.tril(r, -1), 0)
    q2, r2 = qr_positive(m)
    assert np.array_equal(q, q2) and np.array_equal(r, r2)


def test_qr_positive_rank_deficient():
    with pytest.raises(DegenerateMatrix):
        qr_positive(np.array([[1.0, 2.0], [2.0, 4.0]]) * 0 + np.array([[0.0, 0.0], [0.0, 0.0]]))


def test_eig_log_moduli_examples():
    assert np.allclose(eig_log_moduli(np.diag([2.0, 1.0, 0.5])), [np.log(2), 0, -np.log(2)])
    c, s = np.cos(0.7), np.sin(0.7)
    assert np.allclose(eig_log_moduli([[c, -s], [s, c]]), [0, 0], atol=1e-14)
    with pytest.raises(DegenerateMatrix):
        eig_log_moduli(np.diag([1.0, 0.0]))


def test_eig_log_moduli_against_charpoly_roots(rng):
    a = rng.gen.standard_normal((6, 6))
    # exact characteristic polynomial of the (rationalised) matrix, roots by Durand-Kerner
    m = sp.Matrix(6, 6, [sp.Rational(float(x)) for x in a.ravel()])
    coeffs = [float(c) for c in m.charpoly().all_coeffs()]
    roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=200)
    want = np.sort([float(mpmath.log(abs(r))) for r in roots])[::-1]
    got = eig_log_moduli(a)
    assert np.allclose(got, want, atol=1e-8)


def test_eig_log_moduli_sum_is_log_det(rng):
    for _ in range(50):
        a = random_gl(5, rng, 0.1, 10)
        assert np.linalg.cond(a) <= 1e3
        assert abs(eig_log_moduli(a).sum() - np.linalg.slogdet(a)[1]) <= 1e-8


def test_kron_operator_examples():
    assert np.allclose(kron_operator([[3.0]], [[2.0]]), [[1.5]])
    assert np.allclose(kron_operator(np.eye(3), np.eye(2)), np.eye(6))
    t = kron_operator(np.diag([3.0, 7.0]), np.diag([2.0, 5.0]))
    assert np.allclose(np.sort(np.linalg.eigvals(t).real), np.sort([3 / 2, 3 / 5, 7 / 2, 7 / 5]))
    with pytest.raises(DegenerateMatrix):
        kron_operator(np.eye(2), np.zeros((2, 2)))


def test_kron_operator_acts_as_sandwich(rng):
    b1 = rng.gen.standard_normal((2, 2)) + 3 * np.eye(2)
    b2 = rng.gen.standard_normal((3, 3))
    x = rng.gen.standard_normal((3, 2))
    want = b2 @ x @ np.linalg.inv(b1)
    assert np.allclose(kron_operator(b2, b1) @ x.ravel(), want.ravel())
