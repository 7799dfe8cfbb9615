"""Integer partitions, conjugation and dominance order."""
from __future__ import annotations

from collections import Counter
from math import factorial, prod

from ..errors import InvalidPartition

__all__ = [
    "Partition",
    "conjugate",
    "dominates",
    "partitions",
    "partitions_in_box",
    "is_even",
    "z_factor",
]


class Partition(tuple):
    """Weakly decreasing tuple of positive integers.

    Trailing zeros are stripped on construction, so ``Partition((2, 1, 0))``
    equals ``Partition((2, 1))``.
    """

    def __new__(cls, parts=()):
        if isinstance(parts, int):
            parts = (parts,)
        parts = tuple(int(p) for p in parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        if any(p <= 0 for p in parts):
            raise InvalidPartition(f"parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise InvalidPartition(f"parts must be non-increasing: {parts}")
        return super().__new__(cls, parts)

    @property
    def weight(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def conjugate(self) -> "Partition":
        return conjugate(self)

    def padded(self, n: int) -> tuple:
        if len(self) > n:
            raise InvalidPartition(f"{tuple(self)} has more than {n} parts")
        return tuple(self) + (0,) * (n - len(self))

    def cells(self):
        """Boxes ``(i, j)`` of the Young diagram, 1-based row and column."""
        for i, row in enumerate(self, start=1):
            for j in range(1, row + 1):
                yield i, j

    def halve(self) -> "Partition":
        if not is_even(self):
            raise InvalidPartition(f"{tuple(self)} has an odd part")
        return Partition(p // 2 for p in self)

    def __repr__(self):
        return f"Partition({tuple(self)})"


def conjugate(lam) -> Partition:
    lam = Partition(lam)
    if not lam:
        return lam
    return Partition(sum(1 for p in lam if p > j) for j in range(lam[0]))


def is_even(lam) -> bool:
    return all(p % 2 == 0 for p in lam)


def dominates(lam, mu) -> bool:
    """True if ``lam >= mu`` in dominance order (same weight required)."""
    if sum(lam) != sum(mu):
        return False
    s = t = 0
    for i in range(max(len(lam), len(mu))):
        s += lam[i] if i < len(lam) else 0
        t += mu[i] if i < len(mu) else 0
        if s < t:
            return False
    return True


def _gen(j, max_part, max_len):
    if j == 0:
        yield ()
        return
    if max_len == 0:
        return
    for first in range(min(j, max_part), 0, -1):
        for rest in _gen(j - first, first, max_len - 1):
            yield (first,) + rest


def partitions(j: int, max_len: int | None = None) -> list[Partition]:
    """Partitions of ``j`` in reverse lexicographic order."""
    return partitions_in_box(j, j if max_len is None else max_len, j)


def partitions_in_box(j: int, rows: int, cols: int) -> list[Partition]:
    """Partitions of ``j`` with at most ``rows`` parts, each at most ``cols``.

    Ordered reverse lexicographically, which is a linear extension of
    dominance order (larger first).
    """
    if j < 0:
        raise ValueError("weight must be non-negative")
    return [Partition(p) for p in _gen(j, cols, rows)]


def z_factor(rho) -> int:
    """``z_rho = prod_i i^{m_i} m_i!`` (centraliser size in the symmetric group)."""
    return prod(i**m * factorial(m) for i, m in Counter(rho).items())
