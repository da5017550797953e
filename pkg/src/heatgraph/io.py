"""File formats.

Signals: CSV with one row per channel and no header, plus a JSON sidecar with
the same stem (``rec.csv`` / ``rec.json``) holding ``dt_seconds`` or
``fs_hz`` and optionally ``channel_names``; simulation adds ``seed``,
``sigma`` and ``sigma_prime``.

Graphs: dense CSV with a header row of channel names, or JSON
``{"n", "channel_names", "weights"}``.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .simulate import DataMatrix


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj))


def read_json(path):
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc.msg}", line=exc.lineno) from exc


def _fmt(v: float) -> str:
    return repr(float(v))


def sidecar_path(csv_path) -> Path:
    return Path(csv_path).with_suffix(".json")


def write_data(path, X: DataMatrix, **extra) -> tuple[Path, Path]:
    """Write ``X`` as CSV plus sidecar; ``extra`` keys go into the sidecar."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for row in X.values:
            w.writerow([_fmt(v) for v in row])
    meta = {"dt_seconds": X.dt, "channel_names": X.names()}
    meta.update(extra)
    side = sidecar_path(path)
    write_json(side, meta)
    return path, side


def read_matrix_csv(path) -> np.ndarray:
    rows = []
    with Path(path).open(newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                rows.append([float(c) for c in row])
            except ValueError as exc:
                raise ConfigError(f"{path}: non-numeric value ({exc})", line=lineno) from exc
    if not rows:
        raise ConfigError(f"{path}: no data rows")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ConfigError(f"{path}: ragged rows (lengths {sorted(widths)})")
    return np.array(rows, dtype=float)


def read_data(path, dt: float | None = None, fs_hz: float | None = None) -> DataMatrix:
    """Read a signal CSV; ``dt``/``fs_hz`` override the sidecar."""
    path = Path(path)
    meta = {}
    side = sidecar_path(path)
    if side.exists():
        meta = read_json(side)
    if dt is None and fs_hz is not None:
        dt = 1.0 / float(fs_hz)
    if dt is None:
        if "dt_seconds" in meta:
            dt = float(meta["dt_seconds"])
        elif "fs_hz" in meta:
            dt = 1.0 / float(meta["fs_hz"])
        else:
            raise ConfigError(f"{path}: sampling interval unknown (no sidecar dt_seconds/fs_hz)", field="dt_seconds")
    values = read_matrix_csv(path)
    names = meta.get("channel_names")
    if names is not None and len(names) != values.shape[0]:
        raise ConfigError(f"{side}: {len(names)} channel names for {values.shape[0]} rows", field="channel_names")
    return DataMatrix(values, dt, names)


def write_graph_csv(path, W, channel_names=None) -> None:
    W = np.asarray(W, dtype=float)
    names = channel_names or [f"ch{i}" for i in range(W.shape[0])]
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for row in W:
            w.writerow([_fmt(v) for v in row])


def read_graph_csv(path):
    with Path(path).open(newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    names = [c.strip() for c in rows[0]]
    try:
        W = np.array([[float(c) for c in r] for r in rows[1:]], dtype=float)
    except ValueError as exc:
        raise ConfigError(f"{path}: non-numeric graph entry ({exc})") from exc
    if W.shape != (len(names), len(names)):
        raise ConfigError(f"{path}: expected {len(names)}x{len(names)} weights, got {W.shape}")
    return W, names


def graph_to_json(W, channel_names=None) -> dict:
    W = np.asarray(W, dtype=float)
    names = channel_names or [f"ch{i}" for i in range(W.shape[0])]
    return {"n": int(W.shape[0]), "channel_names": list(names), "weights": W.tolist()}


def graph_from_json(obj):
    try:
        W = np.asarray(obj["weights"], dtype=float)
        n = int(obj.get("n", W.shape[0]))
    except KeyError as exc:
        raise ConfigError("graph JSON missing key", field=exc.args[0]) from exc
    if W.shape != (n, n):
        raise ConfigError(f"graph weights shape {W.shape} does not match n={n}", field="weights")
    names = obj.get("channel_names") or [f"ch{i}" for i in range(n)]
    return W, list(names)
