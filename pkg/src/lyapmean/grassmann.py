"""Points of the Grassmannian Gr(n, k) as orthonormal frames.

Covers restriction determinants, the derivative of the induced action in the
graph chart around an invariant subspace, and enumeration of the real
invariant k-subspaces of a matrix with simple spectrum.

The second projection of the incidence manifold {(U, g) : (UA)g = g} onto the
Grassmannian has normal Jacobian identically 1, so it never needs computing.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import null_space

from .errors import DegenerateMatrix, NonGenericSpectrum, NotInvariant
from .linalg import RngStream, as_stream, haar_orthogonal_batch, kron_operator

__all__ = [
    "SubspaceFrame",
    "TopSumResult",
    "haar_subspace",
    "haar_subspace_batch",
    "restriction_log_det",
    "restriction_log_det_batch",
    "induced_chart_derivative",
    "normal_jacobian_pi1",
    "invariant_topk_sum",
    "invariant_topk_sum_batch",
    "count_invariant_subspaces",
]

ORTHO_TOL = 1e-12
COLLISION_TOL = 1e-8
INVARIANCE_TOL = 1e-8


@dataclass(frozen=True)
class SubspaceFrame:
    """A k-dimensional subspace of R^n given by an n x k orthonormal frame."""

    frame: np.ndarray

    def __post_init__(self):
        f = np.asarray(self.frame, dtype=float)
        if f.ndim != 2:
            raise ValueError("frame must be 2-D")
        n, k = f.shape
        if not 1 <= k <= n - 1:
            raise ValueError(f"need 1 <= k <= n-1, got n={n}, k={k}")
        if np.max(np.abs(f.T @ f - np.eye(k))) > ORTHO_TOL * max(1, n):
            raise ValueError("frame columns are not orthonormal")
        object.__setattr__(self, "frame", f)

    @property
    def n(self) -> int:
        return self.frame.shape[0]

    @property
    def k(self) -> int:
        return self.frame.shape[1]

    def complement(self) -> np.ndarray:
        """Orthonormal frame of the orthogonal complement, n x (n-k)."""
        return null_space(self.frame.T)

    @classmethod
    def span(cls, vectors) -> "SubspaceFrame":
        """Frame for the column span of ``vectors`` (must have full column rank)."""
        q, r = np.linalg.qr(np.asarray(vectors, dtype=float))
        if np.any(np.abs(np.diag(r)) < 1e-12):
            raise DegenerateMatrix("spanning vectors are linearly dependent")
        return cls(q)

    @classmethod
    def coordinate(cls, n: int, k: int) -> "SubspaceFrame":
        return cls(np.eye(n)[:, :k])


@dataclass(frozen=True)
class TopSumResult:
    """Best log-volume over real invariant k-subspaces.

    ``value`` is 0 with ``attained=False`` when no real invariant subspace of
    that dimension exists. ``witness`` holds the eigenvalue indices (into the
    moduli-sorted spectrum) of the maximising subset.
    """

    value: float
    attained: bool
    witness: tuple = field(default=())

    @property
    def positive_part(self) -> float:
        return max(self.value, 0.0)


def haar_subspace_batch(n: int, k: int, size: int, rng: RngStream) -> np.ndarray:
    """Frames of ``size`` independent uniform points of Gr(n, k), shape (size, n, k)."""
    if not 1 <= k <= n - 1:
        raise ValueError(f"need 1 <= k <= n-1, got n={n}, k={k}")
    return haar_orthogonal_batch(n, size, rng)[:, :, :k]


def haar_subspace(n: int, k: int, rng: RngStream) -> SubspaceFrame:
    return SubspaceFrame(haar_subspace_batch(n, k, 1, rng)[0])


def _frame(g) -> np.ndarray:
    return g.frame if isinstance(g, SubspaceFrame) else np.asarray(g, dtype=float)


def restriction_log_det(a, g) -> float:
    """``log |det A|_g|``: half the log-determinant of the Gram matrix of A g."""
    f = _frame(g)
    af = np.asarray(a, dtype=float) @ f
    sign, logdet = np.linalg.slogdet(af.T @ af)
    if sign <= 0 or not np.isfinite(logdet):
        raise DegenerateMatrix("A restricted to g is singular")
    return 0.5 * logdet


def restriction_log_det_batch(a, frames) -> np.ndarray:
    """Vectorised :func:`restriction_log_det`; ``a`` is (n, n) or (s, n, n)."""
    af = np.asarray(a, dtype=float) @ frames
    sign, logdet = np.linalg.slogdet(np.swapaxes(af, -1, -2) @ af)
    if np.any(sign <= 0) or not np.all(np.isfinite(logdet)):
        raise DegenerateMatrix("A restricted to g is singular")
    return 0.5 * logdet


def adapted_blocks(b, g) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Blocks of ``B`` in the orthonormal basis (frame of g, frame of g-perp).

    Returns ``(B1, B2, lower)`` where ``B1`` is B compressed to g, ``B2`` is B
    compressed to g-perp and ``lower`` is the g -> g-perp block, which
    vanishes exactly when g is B-invariant.
    """
    g = g if isinstance(g, SubspaceFrame) else SubspaceFrame(g)
    f, h = g.frame, g.complement()
    b = np.asarray(b, dtype=float)
    return f.T @ b @ f, h.T @ b @ h, h.T @ b @ f


def induced_chart_derivative(b, g) -> np.ndarray:
    """Derivative at g of the action of B on Gr(n, k), in the graph chart.

    A tangent vector is a linear map X: g -> g-perp, written as an (n-k) x k
    matrix in the adapted basis; the derivative is ``X -> B2 X inv(B1)``.
    Raises :class:`NotInvariant` if B does not map g into itself.
    """
    b = np.asarray(b, dtype=float)
    b1, b2, lower = adapted_blocks(b, g)
    scale = max(np.max(np.abs(b)), 1.0)
    if np.max(np.abs(lower)) > INVARIANCE_TOL * scale:
        raise NotInvariant("subspace is not invariant under B")
    return kron_operator(b2, b1)


def normal_jacobian_pi1(b1, b2) -> float:
    """Signed ``det(Id - B2 (x) inv(B1)^T)``.

    The normal Jacobian of the projection onto O(n) is the absolute value;
    the sign is kept because the averaged integrand is the signed quantity.
    """
    t = kron_operator(b2, b1)
    return float(np.linalg.det(np.eye(t.shape[0]) - t))


def _sorted_spectrum(b) -> np.ndarray:
    b = np.asarray(b, dtype=float)
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise ValueError("square matrix required")
    lam = np.linalg.eigvals(b)
    if np.any(lam == 0):
        raise DegenerateMatrix("B is singular")
    return lam[np.argsort(-np.abs(lam), kind="stable")]


def _check_simple(lam: np.ndarray) -> None:
    rho = np.max(np.abs(lam))
    diff = np.abs(lam[:, None] - lam[None, :])
    np.fill_diagonal(diff, np.inf)
    if np.min(diff, initial=np.inf) < COLLISION_TOL * rho:
        raise NonGenericSpectrum("repeated eigenvalues within tolerance")


def _partners(lam: np.ndarray) -> np.ndarray:
    """Index of the complex conjugate of each eigenvalue (itself if real)."""
    d = np.abs(lam[..., :, None] - np.conj(lam)[..., None, :])
    return np.argmin(d, axis=-1)


def _closed_subsets(lam: np.ndarray, k: int):
    partner = _partners(lam)
    for s in itertools.combinations(range(len(lam)), k):
        ss = set(s)
        if all(int(partner[i]) in ss for i in s):
            yield s


def invariant_topk_sum(b, k: int) -> TopSumResult:
    """Largest ``sum log|lambda|`` over conjugation-closed k-subsets of the spectrum.

    For B with simple spectrum these subsets are in bijection with the real
    invariant k-subspaces, and the sum equals ``log|det B|_g|`` for the
    corresponding subspace g.
    """
    lam = _sorted_spectrum(b)
    n = len(lam)
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}")
    _check_simple(lam)
    logs = np.log(np.abs(lam))
    best, witness = None, ()
    for s in _closed_subsets(lam, k):
        v = float(sum(logs[i] for i in s))
        if best is None or v > best:
            best, witness = v, s
    if best is None:
        return TopSumResult(0.0, False, ())
    return TopSumResult(best, True, witness)


def count_invariant_subspaces(b, k: int) -> int:
    """Number of real invariant k-subspaces of B (simple spectrum assumed)."""
    lam = _sorted_spectrum(b)
    _check_simple(lam)
    return sum(1 for _ in _closed_subsets(lam, k))


def invariant_topk_sum_batch(bs: np.ndarray, k: int):
    """Vectorised :func:`invariant_topk_sum` over a stack of matrices.

    Returns ``(value, attained, generic, topk)`` arrays: ``value`` is 0 where
    nothing is attained, ``generic`` is False where the spectrum has a
    near-collision (those entries should be discarded), and ``topk`` is the
    sum of the k largest eigenvalue log-moduli.
    """
    lam = np.linalg.eigvals(bs)
    n = lam.shape[-1]
    order = np.argsort(-np.abs(lam), axis=-1, kind="stable")
    lam = np.take_along_axis(lam, order, axis=-1)
    mod = np.abs(lam)
    if np.any(mod == 0):
        raise DegenerateMatrix("singular matrix in batch")
    # sorted, so the top-k subset is summed in the same order as ``topk``
    logs = np.log(mod)
    rho = mod.max(axis=-1)
    diff = np.abs(lam[:, :, None] - lam[:, None, :])
    diff[:, np.arange(n), np.arange(n)] = np.inf
    generic = diff.min(axis=(1, 2)) >= COLLISION_TOL * rho
    partner = _partners(lam)
    value = np.full(len(bs), -np.inf)
    for s in itertools.combinations(range(n), k):
        mask = np.zeros(n, dtype=bool)
        mask[list(s)] = True
        closed = np.all(mask[partner[:, list(s)]], axis=-1)
        v = logs[:, list(s)].sum(axis=-1)
        value = np.where(closed, np.maximum(value, v), value)
    attained = np.isfinite(value)
    value = np.where(attained, value, 0.0)
    topk = logs[:, :k].sum(axis=-1)
    return value, attained, generic, topk

