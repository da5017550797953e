"""Synthetic two-condition datasets with a known diffusivity ratio."""
from __future__ import annotations

from pathlib import Path

import numpy as np

from . import io
from .graph import erdos_renyi_adjacency, laplacian_from_adjacency, scale_to_lambda_max
from .simulate import SimConfig, simulate


def two_condition_subjects(n_subjects: int = 20, n_windows: int = 10, window_steps: int = 20000,
                           n_channels: int = 10, p: float = 0.4, lambda_max: float = 1.0,
                           scales=(("control", 1.0), ("AD", 0.5)), dt: float = 0.03,
                           sigma: float = 1.0, seed: int = 0):
    """Yield ``(subject_id, condition, DataMatrix)`` for each simulated subject.

    Each subject gets its own Erdos-Renyi graph rescaled to ``lambda_max``
    and then multiplied by the scale of its condition. Subjects alternate
    between conditions. Measurement noise has standard deviation
    ``sigma * dt``.
    """
    for s, child in enumerate(np.random.SeedSequence(seed).spawn(n_subjects)):
        condition, scale = scales[s % len(scales)]
        graph_seed, sim_seed = child.generate_state(2)
        rng = np.random.default_rng(int(graph_seed))
        L = scale * scale_to_lambda_max(laplacian_from_adjacency(erdos_renyi_adjacency(n_channels, p, rng)),
                                        lambda_max)
        cfg = SimConfig(L, dt, n_windows * window_steps, int(sim_seed), sigma, sigma * dt)
        yield f"sub{s:03d}", condition, simulate(cfg)


def write_two_condition_dataset(out_dir, **kwargs) -> Path:
    """Write :func:`two_condition_subjects` as CSV files plus a JSON manifest; returns the manifest path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    for subject, condition, X in two_condition_subjects(**kwargs):
        io.write_data(out / f"{subject}.csv", X, fs_hz=X.fs)
        entries.append({"path": f"{subject}.csv", "subject_id": subject, "condition": condition, "fs_hz": X.fs})
    manifest = out / "manifest.json"
    io.write_json(manifest, entries)
    return manifest
