import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from entfid.channels import Channel
from entfid.sampling import random_channel

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

seeds = st.integers(min_value=0, max_value=2**32 - 1)
dims = st.sampled_from([2, 3])
unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


@st.composite
def channels(draw, dim=None):
    """Random square channel drawn through a seeded generator."""
    d = draw(dims) if dim is None else dim
    env = draw(st.integers(min_value=1, max_value=d * d))
    c = random_channel(np.random.default_rng(draw(seeds)), d, env=env)
    return Channel(d, d, c.kraus)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def choi_reference(c: Channel) -> np.ndarray:
    """Choi operator assembled from the definition, independent of the library route."""
    d = c.dim_in
    j = np.zeros((d * c.dim_out, d * c.dim_out), dtype=complex)
    for i in range(d):
        for k in range(d):
            e = np.zeros((d, d))
            e[i, k] = 1.0
            j += np.kron(e, sum(m @ e @ m.conj().T for m in c.kraus))
    return j


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
