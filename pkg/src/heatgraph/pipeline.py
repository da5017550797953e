"""Manifest-driven batch processing: filter -> decimate -> window -> retrieve -> stats.

Work is split into independent units (one per file for preprocessing, one
per file window for retrieval). Results are collected in manifest order, so
the output does not depend on ``parallelism``.
"""
from __future__ import annotations

import csv
import logging
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import io
from .dsp import FilterSpec, butterworth_bandpass, decimate, window
from .errors import ConfigError, HeatGraphError
from .retrieve import RetrievalConfig, retrieve_laplacian
from .simulate import DataMatrix
from .stats import DiffusivityRecord, group_summary, mmse_correlation, normalize_condition

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ManifestEntry:
    path: Path
    subject_id: str
    condition: str
    mmse: int | None = None
    fs_hz: float | None = None


@dataclass
class PipelineConfig:
    filter: FilterSpec | None = field(default_factory=FilterSpec)
    decimate_factor: int = 1
    anti_alias: bool = False
    window_seconds: float | None = 60.0
    hop_seconds: float | None = None
    noise_correction: str = "paper"
    ridge_eps: float = 1e-8
    projection: bool = True
    projection_exponent: str = "as-derived"
    per_subject_mean: bool = False
    parallelism: int = 1
    dt_seconds: float | None = None

    def retrieval(self, dt: float) -> RetrievalConfig:
        return RetrievalConfig(dt, self.noise_correction, self.ridge_eps, self.projection, self.projection_exponent)

    def to_dict(self) -> dict:
        f = self.filter
        return {
            "filter": None if f is None else {"low_hz": f.low_hz, "high_hz": f.high_hz, "order": f.order,
                                              "zero_phase": f.zero_phase},
            "decimate_factor": self.decimate_factor,
            "anti_alias": self.anti_alias,
            "window_seconds": self.window_seconds,
            "hop_seconds": self.hop_seconds,
            "noise_correction": self.noise_correction,
            "ridge_eps": self.ridge_eps,
            "projection": "on" if self.projection else "off",
            "projection_exponent": self.projection_exponent,
            "per_subject_mean": self.per_subject_mean,
        }


def load_manifest(path) -> list[ManifestEntry]:
    """Read a JSON (list or ``{"entries": [...]}``) or CSV manifest.

    Relative signal paths resolve against the manifest's directory.
    """
    path = Path(path)
    if path.suffix.lower() == ".csv":
        with path.open(newline="") as fh:
            raw = [dict(r) for r in csv.DictReader(fh)]
        line_of = {i: i + 2 for i in range(len(raw))}
    else:
        obj = io.read_json(path)
        raw = obj.get("entries", []) if isinstance(obj, dict) else obj
        if not isinstance(raw, list):
            raise ConfigError(f"{path}: manifest must be a list of entries", field="entries")
        line_of = {}

    entries = []
    for i, r in enumerate(raw):
        where = f"{path} entry {i}"
        for key in ("path", "subject_id", "condition"):
            if r.get(key) in (None, ""):
                raise ConfigError(f"{where}: missing field", field=key, line=line_of.get(i))
        try:
            condition = normalize_condition(r["condition"])
            mmse = None if r.get("mmse") in (None, "") else int(float(r["mmse"]))
            fs = None if r.get("fs_hz") in (None, "") else float(r["fs_hz"])
        except ValueError as exc:
            raise ConfigError(f"{where}: {exc}", line=line_of.get(i)) from exc
        p = Path(r["path"])
        entries.append(ManifestEntry(p if p.is_absolute() else path.parent / p, str(r["subject_id"]),
                                     condition, mmse, fs))
    return entries


def check_sampling(entries: list[ManifestEntry], cfg: PipelineConfig) -> float | None:
    """Common sampling rate of the manifest (None if not declared); validates the band."""
    rates = sorted({e.fs_hz for e in entries if e.fs_hz is not None})
    if len(rates) > 1:
        raise ConfigError(f"inconsistent fs_hz across manifest entries: {rates}", field="fs_hz")
    fs = rates[0] if rates else (1.0 / cfg.dt_seconds if cfg.dt_seconds else None)
    if fs is not None and cfg.filter is not None:
        try:
            cfg.filter.check(fs)
        except HeatGraphError as exc:
            raise ConfigError(str(exc), field="band") from exc
    return fs


def preprocess(X: DataMatrix, cfg: PipelineConfig) -> list[DataMatrix]:
    if cfg.filter is not None:
        X = butterworth_bandpass(X, cfg.filter)
    X = decimate(X, cfg.decimate_factor, anti_alias=cfg.anti_alias,
                 order=cfg.filter.order if cfg.filter is not None else 4)
    if cfg.window_seconds is None:
        return [X]
    return window(X, cfg.window_seconds, cfg.hop_seconds)


def _failure(source, window_index, exc) -> dict:
    kind = exc.kind if isinstance(exc, HeatGraphError) else type(exc).__name__
    return {"file": str(source), "window": window_index, "kind": kind, "message": str(exc)}


def _load_unit(args):
    path, fs_hz, dt, cfg = args
    try:
        X = io.read_data(path, dt=dt, fs_hz=fs_hz)
        return preprocess(X, cfg), None
    except (HeatGraphError, OSError, ValueError) as exc:
        return None, _failure(path, None, exc)


def _retrieve_unit(args):
    source, index, X, rcfg = args
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            res = retrieve_laplacian(X, rcfg)
        return res, None
    except (HeatGraphError, np.linalg.LinAlgError, ValueError) as exc:
        return None, _failure(source, index, exc)


def _map(fn, items, parallelism):
    items = list(items)
    if parallelism <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=parallelism) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * parallelism))))


def retrieve_files(paths, cfg: PipelineConfig):
    """Load, preprocess and retrieve every window of every file.

    Returns ``(units, failures)`` where ``units`` is a list of
    ``(path, window_index, RetrievalResult)`` in input order.
    """
    paths = [Path(p) for p in paths]
    loaded = _map(_load_unit, [(p, None, cfg.dt_seconds, cfg) for p in paths], cfg.parallelism)
    return _retrieve_loaded(paths, loaded, cfg)


def _retrieve_loaded(paths, loaded, cfg):
    failures, work = [], []
    for p, (windows, fail) in zip(paths, loaded):
        if fail is not None:
            failures.append(fail)
            continue
        for i, w in enumerate(windows):
            work.append((p, i, w, cfg.retrieval(w.dt)))
    results = _map(_retrieve_unit, work, cfg.parallelism)
    units = []
    for (p, i, _, _), (res, fail) in zip(work, results):
        if fail is not None:
            failures.append(fail)
        else:
            units.append((p, i, res))
    return units, failures


@dataclass
class PipelineResult:
    records: list[DiffusivityRecord]
    failures: list[dict]
    summary: dict


def run_pipeline(entries: list[ManifestEntry], cfg: PipelineConfig) -> PipelineResult:
    if not entries:
        log.warning("empty manifest; nothing to do")
    check_sampling(entries, cfg)
    paths = [e.path for e in entries]
    loaded = _map(_load_unit, [(e.path, e.fs_hz, cfg.dt_seconds, cfg) for e in entries], cfg.parallelism)
    units, failures = _retrieve_loaded(paths, loaded, cfg)

    by_path = {e.path: e for e in entries}
    records = []
    for p, i, res in units:
        e = by_path[p]
        if not (res.alpha > 0 and math.isfinite(res.alpha)):
            failures.append({"file": str(p), "window": i, "kind": "ZeroDiffusivity",
                             "message": f"alpha = {res.alpha!r} is not positive"})
            continue
        records.append(DiffusivityRecord(e.subject_id, e.condition, i, res.alpha, e.mmse, str(p)))

    summary = {
        "n_records": len(records),
        "n_failures": len(failures),
        "conditions": {c: s.to_dict() for c, s in group_summary(records).items()},
        "mmse_correlation": mmse_correlation(records, cfg.per_subject_mean),
        "config": cfg.to_dict(),
    }
    return PipelineResult(records, failures, summary)


def write_records_csv(path, records: list[DiffusivityRecord], root: Path | None = None) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["subject_id", "condition", "source", "window_index", "alpha_per_second", "mmse"])
        for r in records:
            src = _rel(r.source, root)
            w.writerow([r.subject_id, r.condition, src, r.window_index, repr(r.alpha),
                        "" if r.mmse is None else r.mmse])


def _rel(p, root):
    p = Path(p)
    if root is not None:
        try:
            return p.resolve().relative_to(root.resolve()).as_posix()
        except ValueError:
            pass
    return p.as_posix()


def write_pipeline_outputs(result: PipelineResult, out_dir, root: Path | None = None) -> list[Path]:
    """records.csv, summary.json, failures.json and one histogram CSV per condition."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = [out / "records.csv", out / "summary.json", out / "failures.json"]
    write_records_csv(written[0], result.records, root)
    io.write_json(written[1], result.summary)
    fails = [dict(f, file=_rel(f["file"], root)) for f in result.failures]
    io.write_json(written[2], fails)
    for cond, s in result.summary["conditions"].items():
        p = out / f"histogram_{cond}.csv"
        with p.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["bin_left", "bin_right", "count"])
            edges, counts = s["bin_edges"], s["counts"]
            for k, c in enumerate(counts):
                w.writerow([repr(edges[k]), repr(edges[k + 1]), c])
        written.append(p)
    return written
