"""Chunked, substream-seeded Monte Carlo averaging.

Samples are drawn in fixed-size chunks and chunk ``i`` always uses substream
``i`` of the caller's stream, so results depend on the seed and the chunk
size but not on how many workers evaluate the chunks.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, NamedTuple

import numpy as np

from .linalg import RngStream, as_stream

DEFAULT_CHUNK = 8192


class Estimate(NamedTuple):
    estimate: float
    stderr: float
    n: int = 0


def _chunks(nsamples: int, chunk: int):
    full, rem = divmod(nsamples, chunk)
    sizes = [chunk] * full + ([rem] if rem else [])
    return list(enumerate(sizes))


def mc_moments(draw: Callable[[int, RngStream], np.ndarray], nsamples: int, rng,
               *, chunk: int = DEFAULT_CHUNK, workers: int = 1) -> np.ndarray:
    """Sum of values, sum of squares and count over all chunks.

    ``draw(size, stream)`` must return an array whose leading axis has length
    ``size``; trailing axes are summed separately, so vector-valued integrands
    (e.g. a polynomial's coefficients) share the same samples.
    """
    if nsamples < 1:
        raise ValueError("nsamples must be >= 1")
    stream = as_stream(rng)

    def run(item):
        i, size = item
        v = np.asarray(draw(size, stream.substream(i)), dtype=float)
        return v.sum(axis=0), (v * v).sum(axis=0), v.shape[0]

    items = _chunks(nsamples, chunk)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(run, items))
    else:
        parts = [run(it) for it in items]
    s = sum(p[0] for p in parts)
    s2 = sum(p[1] for p in parts)
    cnt = sum(p[2] for p in parts)
    return s, s2, cnt


def summarize(s, s2, cnt):
    """Mean and standard error of the mean from running sums (NaN when empty)."""
    if cnt == 0:
        nan = np.full_like(np.asarray(s, dtype=float), np.nan)
        return nan, nan.copy()
    mean = s / cnt
    if cnt < 2:
        return mean, np.full_like(np.asarray(mean, dtype=float), np.nan)
    var = np.maximum(s2 / cnt - mean * mean, 0.0) * cnt / (cnt - 1)
    return mean, np.sqrt(var / cnt)


def mc_mean(draw, nsamples: int, rng, *, chunk: int = DEFAULT_CHUNK, workers: int = 1) -> Estimate:
    s, s2, cnt = mc_moments(draw, nsamples, rng, chunk=chunk, workers=workers)
    mean, se = summarize(s, s2, cnt)
    return Estimate(float(mean), float(se), int(cnt))


def combined_sigma(*stderrs: float) -> float:
    return math.sqrt(sum(s * s for s in stderrs))
