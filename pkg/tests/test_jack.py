from fractions import Fraction

import pytest
import sympy as sp

from lyapmean.errors import InvalidPartition
from lyapmean.symfun import (
    Partition,
    dominates,
    eval_monomial,
    eval_sympoly,
    jack_in_monomials,
    partitions,
    principal_specialization,
)

from oracles import hall, to_power_sums


def test_degree_one_and_bottom():
    for alpha in (1, 2, Fraction(1, 3)):
        assert jack_in_monomials((1,), alpha, 3).coeffs == {(1,): 1}
        assert jack_in_monomials((1, 1), alpha, 4).coeffs == {(1, 1): 1}


def test_p2_zonal():
    p = jack_in_monomials((2,), 2, 2)
    assert p.coeffs == {(2,): 1, (1, 1): Fraction(2, 3)}


def test_too_many_parts():
    with pytest.raises(InvalidPartition):
        jack_in_monomials((4, 4), 2, 1)


def test_eval_examples():
    assert eval_monomial((1, 1), [1, 1, 1, 1]) == 6
    assert eval_sympoly(jack_in_monomials((3, 1), 2, 3), [0, 0, 0]) == 0
    # m2(1,1) = 2, m11(1,1) = 1
    assert eval_sympoly(jack_in_monomials((2,), 2, 2), [1, 1]) == Fraction(8, 3)
    assert principal_specialization((2,), 2, 2) == Fraction(8, 3)


def test_eval_monomial_brute():
    import itertools

    x = [Fraction(2), Fraction(3), Fraction(5), Fraction(7)]
    for mu in [(2, 1), (1, 1, 1), (3, 3), (2, 2, 1, 1)]:
        perms = set(itertools.permutations(mu + (0,) * (4 - len(mu))))
        want = sum(x[0] ** a * x[1] ** b * x[2] ** c * x[3] ** d for a, b, c, d in perms)
        assert eval_monomial(mu, x) == want


# -------- independent oracles: Hall inner product and the differential operator


@pytest.mark.parametrize("n", range(1, 7))
def test_orthogonality_exact(n):
    alpha = 2
    ps = {lam: to_power_sums(jack_in_monomials(lam, alpha, n), n) for lam in partitions(n)}
    keys = list(ps)
    for i, a in enumerate(keys):
        for b in keys[i + 1:]:
            assert hall(ps[a], ps[b], alpha) == 0, (a, b)


def test_orthogonality_other_alpha():
    alpha = Fraction(1, 3)
    ps = {lam: to_power_sums(jack_in_monomials(lam, alpha, 4), 4) for lam in partitions(4)}
    keys = list(ps)
    for i, a in enumerate(keys):
        for b in keys[i + 1:]:
            assert hall(ps[a], ps[b], sp.Rational(1, 3)) == 0


def test_p2_orthogonal_to_p11_by_gram_schmidt():
    p2 = to_power_sums(jack_in_monomials((2,), 2, 2), 2)
    p11 = to_power_sums(jack_in_monomials((1, 1), 2, 2), 2)
    assert hall(p2, p11, 2) == 0


@pytest.mark.parametrize("lam", [(2,), (2, 1), (3, 1), (2, 2), (2, 1, 1), (3, 2, 1)])
def test_eigenfunction_of_operator_symbolic(lam):
    n = 3
    xs = sp.symbols(f"x1:{n + 1}")
    alpha = sp.Rational(2)
    p = jack_in_monomials(lam, 2, n)
    f = sp.expand(sum(sp.Rational(c.numerator, c.denominator) * eval_monomial(mu, xs)
                      for mu, c in p.coeffs.items()))
    df = alpha / 2 * sum(x**2 * sp.diff(f, x, 2) for x in xs)
    df += sum(xs[i] ** 2 / (xs[i] - xs[j]) * sp.diff(f, xs[i])
              for i in range(n) for j in range(n) if i != j)
    df = sp.expand(sp.cancel(sp.together(df)))
    lead = sp.Poly(f, *xs).coeff_monomial(sp.prod([x**e for x, e in zip(xs, Partition(lam).padded(n))]))
    e = sp.Poly(df, *xs).coeff_monomial(sp.prod([x**e for x, e in zip(xs, Partition(lam).padded(n))])) / lead
    assert sp.expand(df - e * f) == 0


@pytest.mark.parametrize("n", range(1, 7))
def test_triangularity(n):
    for lam in partitions(n):
        for nv in range(len(lam), n + 1):
            p = jack_in_monomials(lam, 2, nv)
            assert p.coeffs[lam] == 1
            assert all(dominates(lam, mu) for mu in p.coeffs)
            assert all(c > 0 for c in p.coeffs.values())


@pytest.mark.parametrize("n", range(0, 7))
def test_principal_specialization_formula(n):
    for lam in partitions(n):
        for nv in range(max(len(lam), 1), 6):
            p = jack_in_monomials(lam, 2, nv)
            assert eval_sympoly(p, [Fraction(1)] * nv) == principal_specialization(lam, 2, nv)
