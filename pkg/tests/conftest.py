import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def dense_projectors(n, marked=0):
    """Independent dense ``(H0, Hf)`` built from explicit outer products."""
    N = 1 << n
    s = np.full(N, 1.0 / math.sqrt(N))
    h0 = np.eye(N) - np.outer(s, s)
    hf = np.eye(N)
    hf[marked, marked] = 0.0
    return h0.astype(complex), hf.astype(complex)


def random_state(rng, n):
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return v / np.linalg.norm(v)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)
