"""Jack symmetric polynomials in the monomial basis, exact over the rationals.

``P_lambda^(alpha)`` is the unique symmetric polynomial that is unitriangular
in dominance order on the monomial basis and is an eigenfunction of the
Laplace-Beltrami type operator

    D = (alpha/2) sum_i x_i^2 d_i^2 + sum_{i != j} x_i^2 / (x_i - x_j) d_i.

We compute the action of D on each monomial symmetric function, then solve
the triangular eigen-equation from the top of the order downward.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import prod

from ..errors import InvalidPartition
from .partitions import Partition, conjugate, dominates, partitions

__all__ = [
    "SymPolyM",
    "jack_in_monomials",
    "eval_monomial",
    "eval_sympoly",
    "principal_specialization",
    "format_sympoly",
]


@dataclass(frozen=True)
class SymPolyM:
    """Homogeneous symmetric polynomial ``sum_mu coeffs[mu] * m_mu`` in ``nvars`` variables."""

    nvars: int
    coeffs: dict = field(default_factory=dict)
    normalization: str = "P"

    def __post_init__(self):
        weights = {sum(mu) for mu in self.coeffs}
        if len(weights) > 1:
            raise ValueError("polynomial is not homogeneous")
        for mu in self.coeffs:
            if len(mu) > self.nvars:
                raise InvalidPartition(f"{tuple(mu)} has more than {self.nvars} parts")

    @property
    def degree(self) -> int:
        return sum(next(iter(self.coeffs))) if self.coeffs else 0

    def __call__(self, point):
        return eval_sympoly(self, point)


def _distinct_permutations(seq):
    seq = sorted(seq, reverse=True)
    n = len(seq)

    def rec(prefix, remaining):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        seen = None
        for idx, v in enumerate(remaining):
            if v == seen:
                continue
            seen = v
            prefix.append(v)
            yield from rec(prefix, remaining[:idx] + remaining[idx + 1:])
            prefix.pop()

    yield from rec([], seq)


@lru_cache(maxsize=None)
def _operator_row(mu: Partition, n: int, alpha: Fraction) -> dict:
    """Coefficients of ``D m_mu`` on ``m_nu``, keyed by nu (only nu <= mu occur)."""
    out: dict = {}

    def add(expo, c):
        if all(expo[i] >= expo[i + 1] for i in range(n - 1)):
            key = Partition(expo)
            out[key] = out.get(key, 0) + c

    half = alpha / 2
    for a in _distinct_permutations(mu.padded(n)):
        add(a, half * sum(x * (x - 1) for x in a))
        for i in range(n):
            for j in range(i + 1, n):
                p, q = a[i], a[j]
                if p == q:
                    add(a, p)
                elif p > q:
                    # x_i^p x_j^q together with its transposition partner
                    b = list(a)
                    b[i], b[j] = q, p
                    add(a, p)
                    add(tuple(b), p)
                    for t in range(1, p - q):
                        b[i], b[j] = p - t, q + t
                        add(tuple(b), p - q)
    return out


_cache_lock = threading.Lock()
_jack_cache: dict = {}


def jack_in_monomials(lam, alpha=2, nvars: int | None = None) -> SymPolyM:
    """Jack polynomial ``P_lambda^(alpha)`` in ``nvars`` variables, monomial basis.

    Normalised so the coefficient of ``m_lambda`` is 1. ``alpha`` is converted
    to a :class:`~fractions.Fraction` and must be positive.
    """
    lam = Partition(lam)
    n = len(lam) if nvars is None else int(nvars)
    if len(lam) > n:
        raise InvalidPartition(f"{tuple(lam)} has more than {n} parts")
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    key = (lam, n, alpha)
    hit = _jack_cache.get(key)
    if hit is not None:
        return hit

    below = [mu for mu in partitions(lam.weight, n) if dominates(lam, mu)]
    rows = {mu: _operator_row(mu, n, alpha) for mu in below}
    e_lam = rows[lam][lam]
    coeffs = {lam: Fraction(1)}
    for nu in below[1:]:
        acc = sum((coeffs[mu] * rows[mu].get(nu, 0) for mu in coeffs), Fraction(0))
        gap = e_lam - rows[nu][nu]
        if gap == 0:
            raise ArithmeticError(f"degenerate eigenvalue at {tuple(nu)}")
        coeffs[nu] = acc / gap
    poly = SymPolyM(n, {mu: c for mu, c in coeffs.items() if c != 0})
    with _cache_lock:
        _jack_cache.setdefault(key, poly)
    return _jack_cache[key]


def eval_monomial(mu, point):
    """``m_mu(point)``, summing each distinct monomial once.

    Works with any numeric type supporting ``+`` and ``*`` (floats, Fractions,
    numpy arrays, sympy expressions). Uses a memoised recursion over the
    multiset of unused parts instead of enumerating permutations.
    """
    mu = Partition(mu)
    xs = list(point)
    n = len(xs)
    if len(mu) > n:
        return 0
    parts = mu.padded(n)
    counts = {}
    for p in parts:
        counts[p] = counts.get(p, 0) + 1
    values = sorted(counts)
    memo = {}

    def rec(i, remaining):
        if i == n:
            return 1
        key = (i, remaining)
        if key in memo:
            return memo[key]
        total = 0
        for idx, v in enumerate(values):
            if remaining[idx]:
                rest = remaining[:idx] + (remaining[idx] - 1,) + remaining[idx + 1:]
                term = rec(i + 1, rest)
                total = total + (term if v == 0 else xs[i] ** v * term)
        memo[key] = total
        return total

    return rec(0, tuple(counts[v] for v in values))


def eval_sympoly(p: SymPolyM, point):
    if len(point) != p.nvars:
        raise ValueError(f"expected {p.nvars} coordinates, got {len(point)}")
    total = 0
    for mu, c in p.coeffs.items():
        total = total + c * eval_monomial(mu, point)
    return total


def principal_specialization(lam, alpha, nvars: int):
    """``P_lambda^(alpha)(1, ..., 1)`` from the hook-type product formula.

    ``prod_{(i,j)} (N - (i-1) + alpha (j-1)) / (alpha * arm + leg + 1)``.
    """
    lam = Partition(lam)
    alpha = Fraction(alpha)
    lc = conjugate(lam)
    num = prod((nvars - (i - 1) + alpha * (j - 1) for i, j in lam.cells()), start=Fraction(1))
    den = prod((alpha * (lam[i - 1] - j) + (lc[j - 1] - i) + 1 for i, j in lam.cells()),
               start=Fraction(1))
    return num / den


def format_sympoly(p: SymPolyM) -> str:
    """Render as e.g. ``m[2] + 2/3 m[1,1]`` (descending in reverse-lex order)."""
    terms = []
    for mu in sorted(p.coeffs, reverse=True):
        c = Fraction(p.coeffs[mu])
        label = "m[" + ",".join(str(x) for x in mu) + "]"
        mag = abs(c)
        body = label if mag == 1 else f"{mag} {label}"
        if not terms:
            terms.append(body if c > 0 else f"-{body}")
        else:
            terms.append(("+ " if c > 0 else "- ") + body)
    return " ".join(terms) if terms else "0"
