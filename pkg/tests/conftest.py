import zlib

import numpy as np
import pytest

from lyapmean.linalg import RngStream


@pytest.fixture
def rng(request):
    # one independent stream per test, stable across runs
    return RngStream(20261019, zlib.crc32(request.node.name.encode()))


def random_gl(n, rng, lo=0.5, hi=2.0):
    from lyapmean.linalg import haar_orthogonal_batch

    s = np.exp(rng.gen.uniform(np.log(lo), np.log(hi), n))
    u, v = haar_orthogonal_batch(n, 2, rng)
    return (u * s) @ v
