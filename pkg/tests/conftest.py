import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def quad1(x):
    x = np.asarray(x, dtype=float)
    return x * (1 - x)


def sine1(x):
    return np.sin(np.pi * np.asarray(x, dtype=float)) / np.pi


def quad_product(X):
    X = np.atleast_2d(X)
    return np.prod(X * (1 - X), axis=1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
