"""Seeded simulation of the sampled stochastic graph heat model.

One step advances the hidden state ``x`` and emits an observation ``x'``::

    x_next   = P @ (x + e),   e  ~ N(0, (sigma * dt)^2 I)
    observed = x_next + e',   e' ~ N(0, sigma_prime^2 I)

with the propagator ``P = expm(-dt * L)``. The internal noise standard
deviation is ``sigma * dt`` per component.
"""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .graph import is_valid_laplacian
from .matfun import as_square, mat_exp

log = logging.getLogger(__name__)

# domain-separation tags for the two noise substreams
_INTERNAL_STREAM = 0x696E74  # "int"
_MEASUREMENT_STREAM = 0x6D6561  # "mea"
_CHUNK = 8192
UNDERFLOW_WARN = 5.0


@dataclass
class DataMatrix:
    """Multichannel recording: ``values`` has shape (n_channels, n_steps)."""

    values: np.ndarray
    dt: float
    channel_names: list[str] | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim == 1:
            self.values = self.values[None, :]
        if self.values.ndim != 2 or self.values.shape[0] < 1 or self.values.shape[1] < 1:
            raise ValueError(f"data must be a non-empty 2-D array, got shape {self.values.shape}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("data contains non-finite values")
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.channel_names is not None:
            self.channel_names = [str(c) for c in self.channel_names]
            if len(self.channel_names) != self.n_channels:
                raise ValueError("channel_names length does not match the number of channels")

    @property
    def n_channels(self) -> int:
        return self.values.shape[0]

    @property
    def n_steps(self) -> int:
        return self.values.shape[1]

    @property
    def fs(self) -> float:
        return 1.0 / self.dt

    @property
    def duration(self) -> float:
        return self.n_steps * self.dt

    def names(self) -> list[str]:
        return self.channel_names or [f"ch{i}" for i in range(self.n_channels)]

    def with_values(self, values, dt=None) -> "DataMatrix":
        return DataMatrix(values, self.dt if dt is None else dt, self.channel_names)


@dataclass
class SimConfig:
    laplacian: np.ndarray
    dt: float
    n_steps: int
    seed: int
    sigma: float = 1.0
    sigma_prime: float = 0.0
    x0: np.ndarray | None = None
    channel_names: list[str] | None = None
    propagation_number: float = field(init=False)

    def __post_init__(self):
        self.laplacian = as_square(self.laplacian, "laplacian")
        n = self.laplacian.shape[0]
        if not is_valid_laplacian(self.laplacian, atol=1e-9):
            warnings.warn("simulation Laplacian is not a valid undirected graph Laplacian", RuntimeWarning, stacklevel=2)
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.sigma < 0 or self.sigma_prime < 0:
            raise ValueError("noise scales must be non-negative")
        if int(self.n_steps) != self.n_steps or self.n_steps < 1:
            raise ValueError(f"n_steps must be a positive integer, got {self.n_steps}")
        self.n_steps = int(self.n_steps)
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        self.seed = int(self.seed)
        self.x0 = np.zeros(n) if self.x0 is None else np.asarray(self.x0, dtype=float).reshape(-1)
        if self.x0.shape != (n,):
            raise ValueError(f"x0 must have length {n}")
        lam = float(np.max(np.abs(np.linalg.eigvalsh(0.5 * (self.laplacian + self.laplacian.T)))))
        self.propagation_number = self.dt * lam
        if self.propagation_number > UNDERFLOW_WARN:
            warnings.warn(
                f"dt * lambda_max = {self.propagation_number:.3g} > {UNDERFLOW_WARN}; propagator modes underflow",
                RuntimeWarning,
                stacklevel=2,
            )

    @property
    def sigma_dt(self) -> float:
        return self.sigma * self.dt


def noise_streams(seed: int) -> tuple[np.random.Generator, np.random.Generator]:
    """Independent (internal, measurement) Philox generators derived from ``seed``."""
    internal = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, _INTERNAL_STREAM])))
    measurement = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, _MEASUREMENT_STREAM])))
    return internal, measurement


def step(x, propagator, rng: np.random.Generator, sigma_dt: float, sigma_prime: float,
         measurement_rng: np.random.Generator | None = None):
    """Advance one sampling interval.

    Returns ``(internal_next, observed)``; the internal state never carries
    measurement noise. ``measurement_rng`` defaults to ``rng``.
    """
    x = np.asarray(x, dtype=float)
    e = sigma_dt * rng.standard_normal(x.shape[0])
    internal = propagator @ (x + e)
    mrng = rng if measurement_rng is None else measurement_rng
    observed = internal + sigma_prime * mrng.standard_normal(x.shape[0])
    return internal, observed


def simulate(config: SimConfig, return_internal: bool = False):
    """Simulate ``config.n_steps`` observed samples.

    Column 0 is ``x0 + e'``; column k is the observation after k steps.
    Output is a deterministic function of the config, noise is drawn in
    fixed-size chunks from the two seeded streams.
    """
    P = mat_exp(config.laplacian, -config.dt)
    n, N = config.laplacian.shape[0], config.n_steps
    rng_int, rng_meas = noise_streams(config.seed)

    internal = np.empty((N, n))
    internal[0] = config.x0
    x = config.x0.copy()
    k = 1
    while k < N:
        m = min(_CHUNK, N - k)
        e = config.sigma_dt * rng_int.standard_normal((m, n))
        for j in range(m):
            x = P @ (x + e[j])
            internal[k + j] = x
        k += m

    observed = internal.copy()
    k = 0
    while k < N:
        m = min(_CHUNK, N - k)
        observed[k:k + m] += config.sigma_prime * rng_meas.standard_normal((m, n))
        k += m

    log.debug("simulated %d steps of %d channels (dt*lambda_max=%.3g)", N, n, config.propagation_number)
    data = DataMatrix(observed.T.copy(), config.dt, config.channel_names)
    if return_internal:
        return data, internal.T.copy()
    return data


def exact_deterministic_solution(L, x0, t: float) -> np.ndarray:
    """Noise-free heat flow ``expm(-t L) @ x0``."""
    if t < 0:
        raise ValueError("t must be non-negative")
    return mat_exp(L, -t) @ np.asarray(x0, dtype=float)
