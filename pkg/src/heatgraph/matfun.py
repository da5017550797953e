"""Dense matrix-function kernels: exp, principal log, ridge inverse, spectral norm.

All routines take and return plain ``numpy.ndarray`` objects of shape (n, n).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import IllConditioned, InvalidMatrix, LogUndefined, NotSymmetric, SingularMatrix

# Higham (2005) backward-error thresholds for the [m/m] Pade approximants.
_PADE_THETA = {
    3: 1.495585217958292e-2,
    5: 2.539398330063230e-1,
    7: 9.504178996162932e-1,
    9: 2.097847961257068e0,
    13: 5.371920351148152e0,
}

_PADE_COEFFS = {
    3: (120.0, 60.0, 12.0, 1.0),
    5: (30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0),
    7: (17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0),
    9: (
        17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
        2162160.0, 110880.0, 3960.0, 90.0, 1.0,
    ),
    13: (
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
        1187353796428800.0, 129060195264000.0, 10559470521600.0,
        670442572800.0, 33522128640.0, 1323241920.0, 40840800.0,
        960960.0, 16380.0, 182.0, 1.0,
    ),
}

IMAG_WARN_LEVEL = 1e-6
DEFAULT_COND_LIMIT = 1e12
SYMMETRY_RTOL = 1e-9


@dataclass(frozen=True)
class LogInfo:
    """Diagnostics from :func:`mat_log_principal`."""

    discarded_imag_max: float
    condition_number: float
    symmetric_path: bool


def as_square(M, name="matrix") -> np.ndarray:
    """Return ``M`` as a finite float (n, n) array or raise :class:`InvalidMatrix`."""
    A = np.asarray(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise InvalidMatrix(f"{name} must be a non-empty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidMatrix(f"{name} contains non-finite entries")
    return A


def _expm_pade(A: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    ident = np.eye(n)
    norm1 = np.linalg.norm(A, 1)

    for m in (3, 5, 7, 9):
        if norm1 <= _PADE_THETA[m]:
            b = _PADE_COEFFS[m]
            powers = [ident, A @ A]
            while len(powers) <= m // 2:
                powers.append(powers[-1] @ powers[1])
            U = A @ sum(b[2 * k + 1] * powers[k] for k in range(m // 2 + 1))
            V = sum(b[2 * k] * powers[k] for k in range(m // 2 + 1))
            return np.linalg.solve(V - U, V + U)

    s = max(0, math.ceil(math.log2(norm1 / _PADE_THETA[13])))
    A = A / 2.0**s
    b = _PADE_COEFFS[13]
    A2 = A @ A
    A4 = A2 @ A2
    A6 = A4 @ A2
    U = A @ (A6 @ (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * ident)
    V = A6 @ (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * ident
    R = np.linalg.solve(V - U, V + U)
    for _ in range(s):
        R = R @ R
    return R


def mat_exp(A, t: float = 1.0) -> np.ndarray:
    """Matrix exponential ``exp(t * A)``.

    Exactly symmetric inputs go through an eigendecomposition; everything else
    uses scaling and squaring with a Pade approximant of degree 3 to 13.
    """
    A = as_square(A)
    if not math.isfinite(t):
        raise InvalidMatrix("t must be finite")
    tA = t * A
    if np.array_equal(tA, tA.T):
        w, V = np.linalg.eigh(tA)
        E = (V * np.exp(w)) @ V.T
        return 0.5 * (E + E.T)
    return _expm_pade(tA)


def mat_log_principal(M, *, cond_limit: float = DEFAULT_COND_LIMIT, full_output: bool = False):
    """Real part of the principal matrix logarithm.

    Parameters
    ----------
    M : array_like, shape (n, n)
        Real matrix with no eigenvalue on the closed negative real axis.
    cond_limit : float
        Largest eigenvector-matrix condition number accepted before raising
        :class:`IllConditioned`.
    full_output : bool
        If True, also return a :class:`LogInfo` with the largest discarded
        imaginary part (relative to the result) and the condition number.

    Raises
    ------
    LogUndefined
        If an eigenvalue is zero or real and negative.
    IllConditioned
        If the eigenvector matrix is numerically singular.
    """
    M = as_square(M)
    scale = max(np.max(np.abs(M)), np.finfo(float).tiny)

    if np.array_equal(M, M.T):
        w, V = np.linalg.eigh(M)
        bad = w <= 0.0
        if np.any(bad):
            raise LogUndefined(f"eigenvalue {w[bad][0]:.6g} on the negative real axis", w[bad][0])
        L = (V * np.log(w)) @ V.T
        L = 0.5 * (L + L.T)
        info = LogInfo(0.0, 1.0, True)
        return (L, info) if full_output else L

    w, V = np.linalg.eig(M)
    w = w.astype(complex)
    on_axis = (np.abs(w.imag) <= 1e-14 * scale) & (w.real <= 0.0)
    if np.any(on_axis):
        lam = w[on_axis][0]
        raise LogUndefined(f"eigenvalue {lam.real:.6g} on the negative real axis", lam)

    cond = float(np.linalg.cond(V))
    if not math.isfinite(cond) or cond > cond_limit:
        raise IllConditioned(f"eigenvector matrix condition {cond:.3g} exceeds {cond_limit:.3g}", cond)

    # L = V diag(log w) V^-1, solved rather than inverted
    Lc = np.linalg.solve(V.T, (V * np.log(w)).T).T
    L = Lc.real
    imag = float(np.max(np.abs(Lc.imag)) / max(np.max(np.abs(L)), np.finfo(float).tiny))
    if imag > IMAG_WARN_LEVEL:
        warnings.warn(f"matrix log discarded imaginary part of relative size {imag:.3g}", RuntimeWarning, stacklevel=2)
    info = LogInfo(imag, cond, False)
    return (L, info) if full_output else L


def ridge_inverse(M, eps: float = 0.0) -> np.ndarray:
    """Inverse of ``M + eps * (trace(M) / n) * I``.

    The ridge is proportional to the mean diagonal so that
    ``ridge_inverse(s * M, eps) == ridge_inverse(M, eps) / s`` for ``s > 0``.
    """
    M = as_square(M)
    if eps < 0 or not math.isfinite(eps):
        raise ValueError("eps must be a finite non-negative number")
    n = M.shape[0]
    R = M + (eps * np.trace(M) / n) * np.eye(n) if eps > 0 else M
    cond = np.linalg.cond(R)
    if not math.isfinite(cond) or cond * np.finfo(float).eps * n > 1.0:
        raise SingularMatrix(f"matrix is singular to working precision (condition {cond:.3g})")
    try:
        return np.linalg.inv(R)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrix(str(exc)) from exc


def check_symmetric(M, rtol: float = SYMMETRY_RTOL) -> np.ndarray:
    M = as_square(M)
    scale = np.max(np.abs(M))
    if np.max(np.abs(M - M.T)) > rtol * scale:
        raise NotSymmetric(f"matrix asymmetric beyond relative tolerance {rtol:g}")
    return M


def spectral_norm_sym(M, rtol: float = SYMMETRY_RTOL) -> float:
    """Largest eigenvalue magnitude of a symmetric matrix."""
    M = check_symmetric(M, rtol)
    w = np.linalg.eigvalsh(0.5 * (M + M.T))
    return float(np.max(np.abs(w)))
