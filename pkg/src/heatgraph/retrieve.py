"""Closed-form heat-diffusion graph retrieval and graph thermal diffusivity.

Given lagged data blocks ``X0`` (all but the last sample) and ``X1`` (all but
the first), the one-step propagator is estimated as::

    N = (X1 - X0)(X1 - X0)^T / 3
    G = (X1 X0^T + N) (X0 X0^T + 2 N)^-1

and the raw Laplacian is ``-log(G) / dt``. ``N`` stands in for the noise
outer products under the assumption that internal and measurement noise have
equal scale.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Literal

import numpy as np

from .errors import HeatGraphError, SingularMatrix, TooShort
from .graph import PROJECTION_EXPONENTS, ProjectionExponent, project_to_valid_laplacian, symmetrize
from .matfun import mat_log_principal, ridge_inverse, spectral_norm_sym
from .simulate import DataMatrix

NoiseCorrection = Literal["paper", "none"]
NOISE_CORRECTIONS = ("paper", "none")


@dataclass(frozen=True)
class RetrievalConfig:
    dt: float
    noise_correction: NoiseCorrection = "paper"
    ridge_eps: float = 1e-8
    projection: bool = True
    projection_exponent: ProjectionExponent = "as-derived"

    def __post_init__(self):
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.noise_correction not in NOISE_CORRECTIONS:
            raise ValueError(f"noise_correction must be one of {NOISE_CORRECTIONS}")
        if not (self.ridge_eps >= 0 and math.isfinite(self.ridge_eps)):
            raise ValueError("ridge_eps must be a finite non-negative number")
        if self.projection_exponent not in PROJECTION_EXPONENTS:
            raise ValueError(f"projection_exponent must be one of {PROJECTION_EXPONENTS}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["projection"] = "on" if self.projection else "off"
        return d


@dataclass
class RetrievalResult:
    laplacian_raw: np.ndarray
    laplacian: np.ndarray
    alpha: float
    normalized_laplacian: np.ndarray
    diagnostics: dict = field(default_factory=dict)
    config: RetrievalConfig | None = None

    def to_dict(self) -> dict:
        return {
            "alpha_per_second": self.alpha,
            "laplacian": self.laplacian.tolist(),
            "laplacian_raw": self.laplacian_raw.tolist(),
            "diagnostics": dict(self.diagnostics),
            "config": self.config.to_dict() if self.config is not None else None,
        }


def _values(X) -> np.ndarray:
    if isinstance(X, DataMatrix):
        return X.values
    A = np.asarray(X, dtype=float)
    return A[None, :] if A.ndim == 1 else A


def lagged_splits(X):
    """``(X0, X1)``: the data without its last and without its first column."""
    V = _values(X)
    if V.shape[1] < 2:
        raise TooShort(f"need at least 2 time steps, got {V.shape[1]}")
    return V[:, :-1], V[:, 1:]


def noise_outer_estimate(X0, X1) -> np.ndarray:
    """``(X1 - X0)(X1 - X0)^T / 3``."""
    X0 = np.asarray(X0, dtype=float)
    X1 = np.asarray(X1, dtype=float)
    if X0.shape != X1.shape:
        raise ValueError(f"shape mismatch {X0.shape} vs {X1.shape}")
    D = X1 - X0
    N = (D @ D.T) / 3.0
    return 0.5 * (N + N.T)


def propagator_estimate(X0, X1, noise_correction: NoiseCorrection = "paper", ridge_eps: float = 1e-8):
    """Estimate the one-step propagator from lagged blocks.

    Returns ``(G, condition_number)`` where the condition number is that of
    the (unregularised) moment matrix being inverted.
    """
    n = X0.shape[0]
    C = X0 @ X0.T
    B = X1 @ X0.T
    if noise_correction == "paper":
        N = noise_outer_estimate(X0, X1)
        B = B + N
        C = C + 2.0 * N
    cond = float(np.linalg.cond(C))

    if noise_correction == "none" and ridge_eps == 0:
        # same estimator as B C^-1, but via QR least squares to avoid squaring the condition number
        sol, _, rank, _ = np.linalg.lstsq(X0.T, X1.T, rcond=None)
        if rank < n:
            raise SingularMatrix(f"lagged data has rank {rank} < {n}")
        return sol.T, cond
    return B @ ridge_inverse(C, ridge_eps), cond


def graph_thermal_diffusivity(L) -> float:
    """Largest eigenvalue of a (symmetric) Laplacian, in 1/s."""
    return spectral_norm_sym(L)


def retrieve_laplacian(X, config: RetrievalConfig) -> RetrievalResult:
    """Retrieve the diffusion Laplacian and its thermal diffusivity from data.

    Raises
    ------
    TooShort
        Fewer than ``n_channels + 1`` time steps.
    LogUndefined, IllConditioned
        The propagator estimate has no real principal logarithm; the error
        carries a ``diagnostics`` dict.
    SingularMatrix
        Rank-deficient moments with ``ridge_eps == 0``.
    """
    V = _values(X)
    n, nt = V.shape
    if nt < n + 1:
        raise TooShort(f"need at least n_channels + 1 = {n + 1} time steps, got {nt}")
    X0, X1 = lagged_splits(V)
    G, cond = propagator_estimate(X0, X1, config.noise_correction, config.ridge_eps)

    diagnostics = {"condition_number": cond, "discarded_imag_max": 0.0, "log_branch_ok": True}
    try:
        logG, info = mat_log_principal(G, full_output=True)
    except HeatGraphError as exc:
        diagnostics["log_branch_ok"] = False
        exc.diagnostics = diagnostics
        raise
    diagnostics["discarded_imag_max"] = info.discarded_imag_max
    diagnostics["eigvec_condition"] = info.condition_number

    L_raw = -logG / config.dt
    if config.projection:
        L = project_to_valid_laplacian(L_raw, config.projection_exponent)
    else:
        L = symmetrize(L_raw)
    alpha = graph_thermal_diffusivity(L)
    L_norm = L / alpha if alpha > 0 else np.zeros_like(L)
    return RetrievalResult(L_raw, L, alpha, L_norm, diagnostics, config)
