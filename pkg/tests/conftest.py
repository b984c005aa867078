import numpy as np
import pytest

from sphdesign.core import Configuration, Mode, design_constant, _potential_raw

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def finite_difference_gradient(V, t, h=1e-5):
    """Central-difference gradient of the potential; the test oracle."""
    ct = float(design_constant(t, V.shape[0]))
    G = np.zeros_like(V)
    for i in range(V.shape[0]):
        for j in range(V.shape[1]):
            up = V.copy()
            dn = V.copy()
            up[i, j] += h
            dn[i, j] -= h
            G[i, j] = (_potential_raw(up, t, ct)[0] - _potential_raw(dn, t, ct)[0]) / (2 * h)
    return G


def random_unit_config(d, n, seed):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((d, n))
    return Configuration(X / np.linalg.norm(X, axis=0), Mode.EQUAL_NORM)


def random_weighted_config(d, n, seed):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((d, n))
    return Configuration(X * np.sqrt(n / np.sum(X * X)), Mode.WEIGHTED, normalized=True)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
