import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from innerlab.core import FiniteBlaschkeProduct

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def disc_point(max_modulus=0.95):
    return st.builds(lambda r, t: r * np.exp(2j * np.pi * t),
                     st.floats(0.0, max_modulus), st.floats(0.0, 1.0))


@st.composite
def blaschke_products(draw, max_extra=3, max_modulus=0.9):
    extra = draw(st.lists(disc_point(max_modulus), min_size=1, max_size=max_extra))
    phase = draw(st.floats(0.0, 1.0))
    return FiniteBlaschkeProduct((0j, *extra), np.exp(2j * np.pi * phase))


def brute_blaschke(f, z):
    """Product formula evaluated term by term in plain Python."""
    out = f.rotation
    for a in f.zeros:
        out *= (z - a) / (1 - a.conjugate() * z)
    return out


@pytest.fixture
def maps():
    from innerlab.core import default_test_functions
    return default_test_functions()


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for key in sorted(RESULTS, key=lambda k: int(k.split("-")[1])):
            terminalreporter.write_line(RESULTS[key])
