import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(42)


def random_truncated_chain(rng, max_levels=8, lo=0.3, hi=2.0):
    """A chain b_0..b_{N-1} > 0 with b_N = 0: an (N+1)-level oscillator."""
    from polyosc import RecurrenceCoefficients

    n = int(rng.integers(1, max_levels + 1))
    b = np.zeros(n + 1)
    b[:n] = rng.uniform(lo, hi, n)
    return RecurrenceCoefficients(b=b)
