"""Log-normal fits, Pearson correlation and per-condition diffusivity summaries."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import NonPositiveSample, TooFew, ZeroVariance

log = logging.getLogger(__name__)

CONDITIONS = ("AD", "control", "other")


def normalize_condition(value: str) -> str:
    v = str(value).strip()
    for c in CONDITIONS:
        if v.lower() == c.lower():
            return c
    raise ValueError(f"condition must be one of {CONDITIONS}, got {value!r}")


@dataclass(frozen=True)
class DiffusivityRecord:
    subject_id: str
    condition: str
    window_index: int
    alpha: float
    mmse: int | None = None
    source: str = ""

    def __post_init__(self):
        object.__setattr__(self, "condition", normalize_condition(self.condition))
        if self.mmse is not None and not 0 <= int(self.mmse) <= 30:
            raise ValueError(f"MMSE must be within 0..30, got {self.mmse}")

    @property
    def key(self):
        return (self.subject_id, self.source, self.window_index)


@dataclass(frozen=True)
class LogNormalFit:
    mu: float
    sigma: float
    n: int

    @property
    def median(self) -> float:
        return math.exp(self.mu)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        pos = x > 0
        z = (np.log(x[pos]) - self.mu) / self.sigma
        out[pos] = np.exp(-0.5 * z * z) / (x[pos] * self.sigma * math.sqrt(2 * math.pi))
        return out


def fit_lognormal(samples: Iterable[float]) -> LogNormalFit:
    """Maximum-likelihood log-normal fit: mean and population std of ``log(x)``."""
    x = np.sort(np.asarray(list(samples), dtype=float))
    if x.size < 2:
        raise TooFew(f"need at least 2 samples, got {x.size}")
    if np.any(~np.isfinite(x)) or np.any(x <= 0):
        raise NonPositiveSample("log-normal samples must be finite and positive")
    y = np.log(x)
    mu = math.fsum(y) / y.size
    sigma = math.sqrt(math.fsum((y - mu) ** 2) / y.size)
    if sigma <= 1e-12 * max(1.0, abs(mu)):
        raise TooFew("degenerate sample: all values equal, log-normal scale is zero")
    return LogNormalFit(mu, sigma, int(x.size))


def pearson_correlation(x: Sequence[float], y: Sequence[float]) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-D sequences of equal length")
    if x.size < 3:
        raise TooFew(f"need at least 3 pairs, got {x.size}")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = math.fsum(dx * dx)
    syy = math.fsum(dy * dy)
    if sxx <= 0 or syy <= 0:
        raise ZeroVariance("correlation undefined for a constant input")
    r = math.fsum(dx * dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


@dataclass
class ConditionSummary:
    condition: str
    n: int
    median: float
    quartiles: tuple[float, float]
    fit: LogNormalFit | None
    bin_edges: list[float] = field(default_factory=list)
    counts: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "condition": self.condition,
            "n": self.n,
            "median": self.median,
            "quartiles": list(self.quartiles),
            "lognormal": None if self.fit is None else {"mu": self.fit.mu, "sigma": self.fit.sigma, "n": self.fit.n},
            "bin_edges": list(self.bin_edges),
            "counts": list(self.counts),
        }


def log_histogram(alpha) -> tuple[list[float], list[int]]:
    """Log-spaced histogram; bin count by Freedman-Diaconis on ``log(alpha)``."""
    y = np.log(np.sort(np.asarray(alpha, dtype=float)))
    edges = np.histogram_bin_edges(y, bins="fd")
    counts, _ = np.histogram(y, bins=edges)
    return np.exp(edges).tolist(), counts.tolist()


def summarize(condition: str, alpha) -> ConditionSummary:
    a = np.sort(np.asarray(alpha, dtype=float))
    try:
        fit = fit_lognormal(a)
    except TooFew:
        fit = None
    q1, med, q3 = np.percentile(a, [25, 50, 75])
    edges, counts = log_histogram(a)
    return ConditionSummary(condition, int(a.size), float(med), (float(q1), float(q3)), fit, edges, counts)


def group_summary(records: Iterable[DiffusivityRecord]) -> dict[str, ConditionSummary]:
    """Per-condition summaries; conditions with fewer than 2 records are skipped with a warning."""
    by_cond: dict[str, list[float]] = {}
    for r in records:
        by_cond.setdefault(r.condition, []).append(r.alpha)
    out = {}
    for cond in sorted(by_cond):
        values = by_cond[cond]
        if len(values) < 2:
            log.warning("condition %s has %d record(s); skipped", cond, len(values))
            continue
        out[cond] = summarize(cond, values)
    return out


def mmse_correlation(records: Iterable[DiffusivityRecord], per_subject_mean: bool = False) -> dict:
    """Pearson r between MMSE and alpha over records that carry an MMSE score."""
    rows = sorted((r for r in records if r.mmse is not None), key=lambda r: r.key)
    if per_subject_mean:
        groups: dict[str, list[DiffusivityRecord]] = {}
        for r in rows:
            groups.setdefault(r.subject_id, []).append(r)
        pairs = [(g[0].mmse, math.fsum(r.alpha for r in g) / len(g)) for _, g in sorted(groups.items())]
    else:
        pairs = [(r.mmse, r.alpha) for r in rows]
    result = {"per_subject_mean": per_subject_mean, "n": len(pairs), "r": None}
    if len(pairs) >= 3:
        try:
            result["r"] = pearson_correlation([p[0] for p in pairs], [p[1] for p in pairs])
        except ZeroVariance as exc:
            result["error"] = str(exc)
    return result
