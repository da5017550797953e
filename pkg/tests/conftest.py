import numpy as np
import pytest

from heatgraph.graph import laplacian_from_adjacency, random_weighted_adjacency, scale_to_lambda_max

L_EDGE = np.array([[1.0, -1.0], [-1.0, 1.0]])


def complete_laplacian(n, w=1.0):
    return laplacian_from_adjacency(w * (np.ones((n, n)) - np.eye(n)))


def random_laplacian(rng, n, lam_max=None, density=0.6, low=0.1, high=2.0):
    while True:
        L = laplacian_from_adjacency(random_weighted_adjacency(n, rng, low, high, density))
        if np.any(L):
            break
    return scale_to_lambda_max(L, lam_max) if lam_max is not None else L


def propagate(L, dt, x0, n_steps):
    """Noise-free trajectory x_{k+1} = expm(-dt L) x_k, built with scipy as an independent propagator."""
    from scipy.linalg import expm

    P = expm(-dt * np.asarray(L))
    X = np.empty((len(x0), n_steps))
    X[:, 0] = x0
    for k in range(1, n_steps):
        X[:, k] = P @ X[:, k - 1]
    return X


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    from .acceptance_report import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(LINES):
            terminalreporter.write_line(LINES[k])
