"""Command-line interface: ``heatgraph {simulate,retrieve,pipeline,selfcheck}``.

Exit codes: 0 success (per-window failures are reported, not fatal),
1 configuration error, 2 I/O error.
"""
from __future__ import annotations

import argparse
import logging
import os
import re
import sys
import time
from pathlib import Path

import numpy as np

from . import io
from .dsp import FilterSpec
from .errors import ConfigError, HeatGraphError, InvalidBand
from .graph import (
    complete_adjacency,
    erdos_renyi_adjacency,
    laplacian_from_adjacency,
    random_weighted_adjacency,
    ring_adjacency,
    scale_to_lambda_max,
)
from .pipeline import PipelineConfig, load_manifest, retrieve_files, run_pipeline, write_pipeline_outputs
from .retrieve import graph_thermal_diffusivity
from .simulate import SimConfig, simulate

log = logging.getLogger("heatgraph")

EXIT_OK, EXIT_CONFIG, EXIT_IO = 0, 1, 2


def _line_of(text: str, key: str) -> int | None:
    m = re.search(rf'"{re.escape(key)}"\s*:', text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _graph_from_spec(spec: dict, text: str) -> np.ndarray:
    kind = spec.get("kind")
    try:
        n = int(spec["n"])
    except KeyError as exc:
        raise ConfigError("graph spec missing field", field="graph.n", line=_line_of(text, "graph")) from exc
    weight = float(spec.get("weight", 1.0))
    rng = np.random.default_rng(int(spec.get("graph_seed", 0)))
    if kind == "ring":
        A = ring_adjacency(n, weight)
    elif kind == "complete":
        A = complete_adjacency(n, weight)
    elif kind == "erdos_renyi":
        A = erdos_renyi_adjacency(n, float(spec.get("p", 0.4)), rng, weight)
    elif kind == "weighted":
        A = random_weighted_adjacency(n, rng, float(spec.get("low", 0.5)), float(spec.get("high", 1.5)),
                                      float(spec.get("density", 1.0)))
    else:
        raise ConfigError(f"unknown graph kind {kind!r}", field="graph.kind", line=_line_of(text, "kind"))
    L = laplacian_from_adjacency(A)
    if "lambda_max" in spec:
        L = scale_to_lambda_max(L, float(spec["lambda_max"]))
    return L


def load_sim_config(path, seed: int | None = None) -> tuple[SimConfig, str]:
    """Parse a simulation JSON config into a :class:`SimConfig` and output stem."""
    text = Path(path).read_text()
    cfg = io.read_json(path)
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: top level must be an object")

    def need(key):
        if key not in cfg:
            raise ConfigError(f"{path}: missing required field", field=key)
        return cfg[key]

    if "laplacian" in cfg:
        L = np.asarray(cfg["laplacian"], dtype=float)
    elif "adjacency" in cfg:
        L = laplacian_from_adjacency(np.asarray(cfg["adjacency"], dtype=float))
    elif "graph" in cfg:
        L = _graph_from_spec(cfg["graph"], text)
    else:
        raise ConfigError(f"{path}: one of 'laplacian', 'adjacency' or 'graph' is required", field="graph")

    raw_seed = need("seed") if seed is None else seed
    values = {}
    for key, conv in (("dt_seconds", float), ("n_steps", int), ("sigma", float), ("sigma_prime", float)):
        if key not in cfg and key in ("sigma", "sigma_prime"):
            continue
        try:
            values[key] = conv(need(key))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{path}: bad value ({exc})", field=key, line=_line_of(text, key)) from exc
    try:
        sim = SimConfig(
            laplacian=L,
            dt=values["dt_seconds"],
            n_steps=values["n_steps"],
            seed=int(raw_seed),
            sigma=values.get("sigma", 1.0),
            sigma_prime=values.get("sigma_prime", 0.0),
            x0=cfg.get("x0"),
            channel_names=cfg.get("channel_names"),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return sim, str(cfg.get("name", Path(path).stem))


def _run_log(out: Path, message: str) -> None:
    out.mkdir(parents=True, exist_ok=True)
    stamp = time.strftime("%Y-%m-%dT%H:%M:%S")
    with (out / "run.log").open("a") as fh:
        fh.write(f"{stamp} {message}\n")


def cmd_simulate(args) -> int:
    sim, stem = load_sim_config(args.config, args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    X = simulate(sim)
    io.write_data(out / f"{stem}.csv", X, seed=sim.seed, sigma=sim.sigma, sigma_prime=sim.sigma_prime)
    io.write_graph_csv(out / f"{stem}.laplacian.csv", sim.laplacian, X.names())
    alpha = graph_thermal_diffusivity(sim.laplacian)
    print(f"wrote {out / (stem + '.csv')} ({X.n_channels} channels x {X.n_steps} steps)")
    print(f"alpha_true_per_second {alpha!r}")
    _run_log(out, f"simulate {args.config} seed={sim.seed}")
    return EXIT_OK


def _filter_from_args(args) -> FilterSpec | None:
    if args.band is None:
        return None
    try:
        return FilterSpec(args.band[0], args.band[1], args.order, args.zero_phase)
    except InvalidBand as exc:
        raise ConfigError(str(exc), field="band") from exc


def _pipeline_config(args, default_window) -> PipelineConfig:
    window_seconds = args.window_seconds if args.window_seconds is not None else default_window
    return PipelineConfig(
        filter=_filter_from_args(args),
        decimate_factor=args.decimate,
        anti_alias=args.anti_alias,
        window_seconds=window_seconds if window_seconds and window_seconds > 0 else None,
        noise_correction=args.noise_correction,
        ridge_eps=args.ridge,
        projection=args.projection == "on",
        projection_exponent=args.projection_exponent,
        per_subject_mean=getattr(args, "per_subject_mean", False),
        parallelism=max(1, args.parallelism),
        dt_seconds=args.dt_seconds,
    )


def cmd_retrieve(args) -> int:
    cfg = _pipeline_config(args, default_window=None)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    units, failures = retrieve_files(args.files, cfg)
    for path, i, res in units:
        io.write_json(out / f"{Path(path).stem}.w{i:04d}.json", res.to_dict())
    io.write_json(out / "failures.json", [dict(f, file=Path(f["file"]).name) for f in failures])
    print(f"{len(units)} window(s) retrieved, {len(failures)} failure(s)")
    for path, i, res in units:
        print(f"{Path(path).name} window {i}: alpha_per_second {res.alpha!r}")
    _run_log(out, f"retrieve {len(args.files)} file(s)")
    return EXIT_OK


def cmd_pipeline(args) -> int:
    cfg = _pipeline_config(args, default_window=60.0)
    manifest = Path(args.manifest)
    entries = load_manifest(manifest)
    result = run_pipeline(entries, cfg)
    out = Path(args.out)
    write_pipeline_outputs(result, out, root=manifest.parent)
    s = result.summary
    print(f"{s['n_records']} record(s), {s['n_failures']} failure(s)")
    for cond, cs in s["conditions"].items():
        print(f"{cond}: n={cs['n']} median={cs['median']:.6g}")
    if s["mmse_correlation"]["r"] is not None:
        print(f"mmse_alpha_pearson_r {s['mmse_correlation']['r']:.4f}")
    _run_log(out, f"pipeline {manifest} entries={len(entries)}")
    return EXIT_OK


def cmd_selfcheck(args) -> int:
    from .selfcheck import run_selfcheck

    return EXIT_OK if run_selfcheck(verbose=True) else EXIT_CONFIG


def _add_processing_flags(p: argparse.ArgumentParser, band_default):
    p.add_argument("--dt-seconds", type=float, default=None, help="sampling interval if no sidecar/fs_hz is given")
    p.add_argument("--band", type=float, nargs=2, metavar=("LO", "HI"), default=band_default)
    p.add_argument("--no-filter", dest="band", action="store_const", const=None, help="skip the bandpass")
    p.add_argument("--order", type=int, default=4)
    phase = p.add_mutually_exclusive_group()
    phase.add_argument("--zero-phase", dest="zero_phase", action="store_true", default=True)
    phase.add_argument("--forward-only", dest="zero_phase", action="store_false")
    p.add_argument("--decimate", type=int, default=1, metavar="K")
    p.add_argument("--anti-alias", action="store_true")
    p.add_argument("--window-seconds", type=float, default=None)
    p.add_argument("--ridge", type=float, default=1e-8, metavar="EPS")
    p.add_argument("--noise-correction", choices=("paper", "none"), default="paper")
    p.add_argument("--projection", choices=("on", "off"), default="on")
    p.add_argument("--projection-exponent", choices=("as-derived", "as-printed"), default="as-derived")
    p.add_argument("--parallelism", type=int, default=1, metavar="N")
    p.add_argument("--out", default=".", metavar="DIR")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="heatgraph", description="Heat-diffusion graph retrieval from multichannel signals.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate a signal from a JSON config")
    p.add_argument("config")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.add_argument("--out", default=".", metavar="DIR")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("retrieve", help="retrieve Laplacian and diffusivity from signal CSV files")
    p.add_argument("files", nargs="+")
    _add_processing_flags(p, band_default=None)
    p.set_defaults(func=cmd_retrieve)

    p = sub.add_parser("pipeline", help="run filter/decimate/window/retrieve/stats over a manifest")
    p.add_argument("manifest")
    _add_processing_flags(p, band_default=[0.5, 45.0])
    p.add_argument("--per-subject-mean", action="store_true", help="correlate MMSE with per-subject mean alpha")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("selfcheck", help="run quick numerical self-checks")
    p.set_defaults(func=cmd_selfcheck)
    return parser


def main(argv=None) -> int:
    level = getattr(logging, os.environ.get("HEATGRAPH_LOG", "WARNING").upper(), logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except HeatGraphError as exc:
        print(f"error: {exc.kind}: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
