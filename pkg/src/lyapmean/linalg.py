"""Small dense linear algebra and Haar sampling on the orthogonal group.

Every stochastic routine takes an explicit :class:`RngStream`; there is no
module-level random state.
"""
from __future__ import annotations

import numpy as np

from .errors import DegenerateMatrix

__all__ = [
    "RngStream",
    "as_stream",
    "haar_orthogonal",
    "haar_orthogonal_batch",
    "qr_positive",
    "eig_log_moduli",
    "kron_operator",
]

DEGENERATE_TOL = 1e-300


class RngStream:
    """Counter-based random stream identified by ``(master_seed, stream_id)``.

    Streams with distinct identifiers are statistically independent (they are
    derived through :class:`numpy.random.SeedSequence` spawn keys). The stream
    carries generator state, so successive draws differ; constructing a new
    stream with the same identifiers replays the sequence bit-for-bit.
    """

    def __init__(self, master_seed: int, stream_id: int = 0, _path: tuple = ()):
        if master_seed < 0 or stream_id < 0:
            raise ValueError("seed and stream id must be non-negative")
        self.master_seed = int(master_seed)
        self.stream_id = int(stream_id)
        self._path = tuple(int(p) for p in _path)
        seq = np.random.SeedSequence(self.master_seed, spawn_key=(self.stream_id, *self._path))
        self.gen = np.random.Generator(np.random.PCG64(seq))

    def substream(self, i: int) -> "RngStream":
        """Independent child stream; does not consume state from ``self``."""
        return RngStream(self.master_seed, self.stream_id, self._path + (i,))

    def __repr__(self):
        return f"RngStream(master_seed={self.master_seed}, stream_id={self.stream_id}, path={self._path})"


def as_stream(rng) -> RngStream:
    if isinstance(rng, RngStream):
        return rng
    if rng is None:
        raise TypeError("an explicit RngStream or integer seed is required")
    return RngStream(int(rng))


def haar_orthogonal_batch(n: int, size: int, rng: RngStream) -> np.ndarray:
    """``size`` independent Haar-distributed elements of O(n), shape ``(size, n, n)``.

    QR of a Gaussian matrix, with the columns of Q re-signed so that R has a
    positive diagonal; this makes the map Gaussian -> Q equivariant and the
    output exactly Haar.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    z = as_stream(rng).gen.standard_normal((size, n, n))
    q, r = np.linalg.qr(z)
    d = np.sign(np.diagonal(r, axis1=-2, axis2=-1))
    d[d == 0] = 1.0
    return q * d[:, None, :]


def haar_orthogonal(n: int, rng: RngStream) -> np.ndarray:
    return haar_orthogonal_batch(n, 1, rng)[0]


def qr_positive(m) -> tuple[np.ndarray, np.ndarray]:
    """Thin QR with the diagonal of R forced strictly positive.

    Raises :class:`DegenerateMatrix` if some diagonal entry of R is below
    ``1e-300`` in magnitude (rank collapse).
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] < m.shape[1]:
        raise DegenerateMatrix(f"need a tall or square matrix, got shape {m.shape}")
    q, r = np.linalg.qr(m)
    d = np.diag(r).copy()
    if np.any(np.abs(d) < DEGENERATE_TOL) or not np.all(np.isfinite(d)):
        raise DegenerateMatrix("matrix does not have full column rank")
    s = np.sign(d)
    return q * s, r * s[:, None]


def eig_log_moduli(a) -> np.ndarray:
    """Sorted (non-increasing) ``log|lambda_i(A)|`` with algebraic multiplicity."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("square matrix required")
    sign, logdet = np.linalg.slogdet(a)
    if sign == 0 or not np.isfinite(logdet):
        raise DegenerateMatrix("singular matrix has no finite eigenvalue log-moduli")
    lam = np.linalg.eigvals(a)
    mod = np.abs(lam)
    if np.any(mod == 0):
        raise DegenerateMatrix("zero eigenvalue")
    return np.sort(np.log(mod))[::-1]


def kron_operator(b2, b1) -> np.ndarray:
    """Matrix of ``X -> B2 @ X @ inv(B1)`` on (n-k) x k matrices X.

    The basis is the standard entry basis in row-major order, i.e. the matrix
    acts on ``X.reshape(-1)``. Row-major vectorisation gives
    ``vec(B2 X C) = (B2 kron C^T) vec(X)`` with ``C = inv(B1)``.
    """
    b1 = np.atleast_2d(np.asarray(b1, dtype=float))
    b2 = np.atleast_2d(np.asarray(b2, dtype=float))
    try:
        c = np.linalg.inv(b1)
    except np.linalg.LinAlgError as exc:
        raise DegenerateMatrix("B1 is singular") from exc
    if not np.all(np.isfinite(c)):
        raise DegenerateMatrix("B1 is singular")
    return np.kron(b2, c.T)


def kron_operator_batch(b2, b1) -> np.ndarray:
    """Stacked version of :func:`kron_operator` over leading axis."""
    c = np.linalg.inv(b1)
    ct = np.swapaxes(c, -1, -2)
    s, p, _ = b2.shape
    k = b1.shape[-1]
    out = b2[:, :, None, :, None] * ct[:, None, :, None, :]
    return out.reshape(s, p * k, p * k)
