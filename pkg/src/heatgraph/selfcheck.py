"""Fast numerical self-checks run by ``heatgraph selfcheck``."""
from __future__ import annotations

import numpy as np

from .graph import is_valid_laplacian, laplacian_from_adjacency, project_to_valid_laplacian, random_weighted_adjacency, scale_to_lambda_max
from .matfun import mat_exp, mat_log_principal
from .retrieve import RetrievalConfig, graph_thermal_diffusivity, retrieve_laplacian


def _checks(seed: int = 0):
    rng = np.random.default_rng(seed)
    L = scale_to_lambda_max(laplacian_from_adjacency(random_weighted_adjacency(8, rng, 0.1, 2.0, 0.6)), 2.0)
    dt = 0.03

    err = np.linalg.norm(mat_log_principal(mat_exp(L, -dt)) + dt * L) / np.linalg.norm(dt * L)
    yield "exp/log round trip", err < 1e-8, err

    P = mat_exp(L, -dt)
    X = np.empty((8, 256))
    X[:, 0] = rng.standard_normal(8)
    for k in range(1, 256):
        X[:, k] = P @ X[:, k - 1]
    res = retrieve_laplacian(X, RetrievalConfig(dt, noise_correction="none", ridge_eps=0.0))
    err = np.linalg.norm(res.laplacian - L) / np.linalg.norm(L)
    yield "exact retrieval", err < 1e-6, err

    Lp = project_to_valid_laplacian(L)
    err = np.linalg.norm(Lp - L)
    yield "projection fixed point", err < 1e-12 * max(1.0, np.linalg.norm(L)), err
    Lr = L + 0.3 * rng.standard_normal(L.shape)
    yield "projection validity", is_valid_laplacian(project_to_valid_laplacian(Lr)), 0.0

    K = laplacian_from_adjacency(np.ones((5, 5)) - np.eye(5))
    err = abs(graph_thermal_diffusivity(K) - 5.0)
    yield "diffusivity of K5", err < 1e-9, err


def run_selfcheck(verbose: bool = False) -> bool:
    ok = True
    for name, passed, value in _checks():
        ok &= bool(passed)
        if verbose:
            print(f"{'PASS' if passed else 'FAIL'} {name} ({value:.3g})")
    return ok
