"""Graph Laplacians, adjacency conversion and projection onto valid Laplacians."""
from __future__ import annotations

import math
from typing import Literal

import numpy as np

from .matfun import as_square

ProjectionExponent = Literal["as-derived", "as-printed"]
PROJECTION_EXPONENTS = ("as-derived", "as-printed")


def degrees(A) -> np.ndarray:
    """Row sums of ``A`` using compensated summation."""
    A = np.asarray(A, dtype=float)
    return np.array([math.fsum(row) for row in A])


def laplacian_from_adjacency(A) -> np.ndarray:
    """``L = diag(A @ 1) - A``."""
    A = as_square(A, "adjacency")
    L = -A.copy()
    L[np.diag_indices_from(L)] += degrees(A)
    return L


def adjacency_from_laplacian(L) -> np.ndarray:
    """Off-diagonal part of ``-L`` with a zero diagonal."""
    L = as_square(L, "laplacian")
    A = -L.copy()
    np.fill_diagonal(A, 0.0)
    return A


def adjacency_from_raw_laplacian(Lraw):
    """Split a raw Laplacian estimate into measured degrees and adjacency.

    Returns
    -------
    D : ndarray, shape (n,)
        The diagonal of ``Lraw``; may contain negative values.
    A : ndarray, shape (n, n)
        ``diag(D) - Lraw`` with the diagonal forced to zero. Not necessarily
        symmetric or non-negative.
    """
    Lraw = as_square(Lraw, "raw laplacian")
    D = np.diag(Lraw).copy()
    return D, adjacency_from_laplacian(Lraw)


def degree_scaling(D, Ds, exponent: ProjectionExponent = "as-derived") -> np.ndarray:
    """Per-node factors mixing measured degrees ``D`` with clamped degrees ``Ds``.

    ``sqrt((max(D, 0) + Ds) / (2 Ds))``, with isolated nodes (``Ds == 0``)
    left unscaled. ``"as-printed"`` applies a further square root.
    """
    if exponent not in PROJECTION_EXPONENTS:
        raise ValueError(f"unknown projection exponent {exponent!r}")
    D = np.asarray(D, dtype=float)
    Ds = np.asarray(Ds, dtype=float)
    f = np.ones_like(Ds)
    live = Ds > 0
    f[live] = np.sqrt((np.maximum(D[live], 0.0) + Ds[live]) / (2.0 * Ds[live]))
    if exponent == "as-printed":
        f = np.sqrt(f)
    return f


def project_to_valid_laplacian(Lraw, exponent: ProjectionExponent = "as-derived") -> np.ndarray:
    """Project a raw Laplacian estimate onto undirected non-negative graph Laplacians.

    The adjacency part is symmetrised and clamped at zero, then every node is
    rescaled so its degree moves halfway towards the (clamped) measured degree
    on the diagonal of ``Lraw``. A valid Laplacian is a fixed point.
    """
    D, A = adjacency_from_raw_laplacian(Lraw)
    As = np.maximum(0.5 * (A + A.T), 0.0)
    f = degree_scaling(D, degrees(As), exponent)
    At = f[:, None] * As * f[None, :]
    At = 0.5 * (At + At.T)
    return laplacian_from_adjacency(At)


def symmetrize(L) -> np.ndarray:
    L = as_square(L)
    return 0.5 * (L + L.T)


def is_valid_laplacian(L, atol: float = 1e-10) -> bool:
    """Symmetric, non-positive off-diagonals, zero row sums and PSD, up to ``atol`` relative."""
    L = np.asarray(L, dtype=float)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        return False
    scale = max(np.max(np.abs(L)), 1.0) if L.size else 1.0
    tol = atol * scale
    if np.max(np.abs(L - L.T)) > tol:
        return False
    off = L[~np.eye(L.shape[0], dtype=bool)]
    if off.size and np.max(off) > tol:
        return False
    if np.max(np.abs(L.sum(axis=1))) > tol * L.shape[0]:
        return False
    w = np.linalg.eigvalsh(0.5 * (L + L.T))
    return bool(w[0] >= -atol * max(w[-1], 1.0))


def edge_weights(L) -> np.ndarray:
    """Upper-triangle adjacency weights ``-L[i, j]`` for ``i < j``."""
    L = np.asarray(L, dtype=float)
    iu = np.triu_indices(L.shape[0], 1)
    return -L[iu]


# graph generators used by simulation configs and tests


def ring_adjacency(n: int, weight: float = 1.0) -> np.ndarray:
    A = np.zeros((n, n))
    if n < 2:
        return A
    for i in range(n):
        j = (i + 1) % n
        A[i, j] = A[j, i] = weight
    return A


def complete_adjacency(n: int, weight: float = 1.0) -> np.ndarray:
    A = np.full((n, n), float(weight))
    np.fill_diagonal(A, 0.0)
    return A


def erdos_renyi_adjacency(n: int, p: float, rng: np.random.Generator, weight: float = 1.0,
                          connected: bool = True, max_tries: int = 1000) -> np.ndarray:
    """Unit-weight Erdos-Renyi graph, redrawn until connected when ``connected``."""
    for _ in range(max_tries):
        upper = np.triu(rng.random((n, n)) < p, 1)
        A = weight * (upper | upper.T).astype(float)
        if not connected or n == 1 or algebraic_connectivity(laplacian_from_adjacency(A)) > 1e-9:
            return A
    raise RuntimeError(f"no connected G({n}, {p}) graph after {max_tries} draws")


def random_weighted_adjacency(n: int, rng: np.random.Generator, low: float = 0.5, high: float = 1.5,
                              density: float = 1.0) -> np.ndarray:
    """Symmetric graph with i.i.d. uniform weights on a ``density`` fraction of pairs."""
    W = rng.uniform(low, high, (n, n))
    keep = rng.random((n, n)) < density
    upper = np.triu(W * keep, 1)
    return upper + upper.T


def algebraic_connectivity(L) -> float:
    w = np.linalg.eigvalsh(np.asarray(L, dtype=float))
    return float(w[1]) if w.size > 1 else 0.0


def scale_to_lambda_max(L, target: float) -> np.ndarray:
    L = np.asarray(L, dtype=float)
    lam = float(np.max(np.abs(np.linalg.eigvalsh(L))))
    return L * (target / lam) if lam > 0 else L.copy()
