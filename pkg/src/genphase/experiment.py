"""Experiment driver: config parsing, measurement sweeps, result emission.

An experiment sweeps measurement counts and trial seeds over a set of
solvers. Per (m, seed) all solvers share the same sensing matrix,
observations and initialization, so comparisons isolate the algorithm.
Everything is driven by split RngStreams keyed on (seed, m), which makes
the whole pipeline deterministic: the same spec always produces the same
CSV bytes, regardless of thread count.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import __version__
from .errors import SpecValidationError
from .generator import forward, load_weights, random_generator
from .metrics import SsimConfig, dist_up_to_sign, recon_error_per_pixel, sign_correct, ssim
from .mnist import load_mnist_idx
from .rng import RngStream
from .sensing import make_sensing, observe
from .solvers import SOLVERS, SolverConfig, gd_baseline

PLANTED = "planted_synthetic"
DATASET = "dataset_images"

# fixed ordinals so per-solver rng streams do not depend on config order
_SOLVER_ORDINAL = {"appgd": 0, "apgd": 1, "gd": 2}

CSV_COLUMNS = ["solver", "m", "seed", "final_dist", "per_pixel_error",
               "ssim", "wall_seconds"]


@dataclass(frozen=True)
class GeneratorSource:
    source: str                      # "random" | "file"
    path: str | None = None
    latent_dim: int | None = None
    hidden_dims: tuple[int, ...] = ()
    output_dim: int | None = None
    weight_seed: int = 0


@dataclass(frozen=True)
class ExperimentSpec:
    mode: str
    generator: GeneratorSource
    measurements: tuple[int, ...]
    seeds: tuple[int, ...]
    solvers: dict[str, SolverConfig]
    planted_seed: int = 0
    image_paths: tuple[str, ...] = ()
    image_resize_to: int | None = None
    gd_total_steps: int | None = None
    ssim_enabled: bool = False
    image_height: int = 0
    image_width: int = 0
    dynamic_range: float = 1.0
    timing: str = "zero"             # "zero" keeps CSV bytes reproducible
    csv_path: str = "results.csv"
    json_path: str = "manifest.json"

    def validate(self):
        if self.mode not in (PLANTED, DATASET):
            raise SpecValidationError(f"unknown mode {self.mode!r}")
        if not self.measurements:
            raise SpecValidationError("need at least one measurement count")
        if any(m < 1 for m in self.measurements):
            raise SpecValidationError("all measurement counts must be >= 1")
        if not self.seeds:
            raise SpecValidationError("need at least one trial seed")
        if not self.solvers:
            raise SpecValidationError("need at least one solver")
        for name in self.solvers:
            if name not in SOLVERS:
                raise SpecValidationError(f"unknown solver {name!r}")
        if self.mode == DATASET and not self.image_paths:
            raise SpecValidationError("dataset_images mode needs image paths")
        if self.timing not in ("zero", "real"):
            raise SpecValidationError(f"timing must be 'zero' or 'real'")
        if self.ssim_enabled and (self.image_height < 1 or self.image_width < 1):
            raise SpecValidationError("ssim needs image_height and image_width")


@dataclass
class TrialRecord:
    solver: str
    m: int
    seed: int
    final_dist: float
    per_pixel_error: float
    ssim: float | None
    wall_seconds: float              # zeroed unless timing = "real"
    wall_seconds_measured: float = 0.0
    input_hash: str = ""             # sha256 over (A, y, x0) bytes
    loss_trace: list[float] = field(default_factory=list)
    dist_trace: list[float] = field(default_factory=list)


def _solver_config_from_table(table: dict) -> SolverConfig:
    known = {f.name for f in dataclasses.fields(SolverConfig)}
    unknown = set(table) - known - {"total_steps"}
    if unknown:
        raise SpecValidationError(f"unknown solver config keys: {sorted(unknown)}")
    return SolverConfig(**{k: v for k, v in table.items() if k in known})


def load_spec(path) -> ExperimentSpec:
    """Parse a TOML experiment config into a validated ExperimentSpec."""
    with open(path, "rb") as f:
        try:
            doc = tomllib.load(f)
        except tomllib.TOMLDecodeError as e:
            raise SpecValidationError(f"config is not valid TOML: {e}") from e

    gen_table = doc.get("generator", {})
    gen = GeneratorSource(
        source=gen_table.get("source", "random"),
        path=gen_table.get("path"),
        latent_dim=gen_table.get("latent_dim"),
        hidden_dims=tuple(gen_table.get("hidden_dims", ())),
        output_dim=gen_table.get("output_dim"),
        weight_seed=gen_table.get("weight_seed", 0),
    )
    if gen.source not in ("random", "file"):
        raise SpecValidationError(f"generator source must be 'random' or 'file'")
    if gen.source == "file" and not gen.path:
        raise SpecValidationError("generator source 'file' needs a path")
    if gen.source == "random" and (not gen.latent_dim or not gen.output_dim):
        raise SpecValidationError(
            "random generator needs latent_dim and output_dim")

    solver_tables = doc.get("solvers", {})
    solvers = {name: _solver_config_from_table(table)
               for name, table in solver_tables.items()}
    gd_total = solver_tables.get("gd", {}).get("total_steps")

    metrics_table = doc.get("metrics", {})
    images_table = doc.get("images", {})
    output_table = doc.get("output", {})
    spec = ExperimentSpec(
        mode=doc.get("mode", PLANTED),
        generator=gen,
        measurements=tuple(doc.get("measurements", ())),
        seeds=tuple(doc.get("seeds", ())),
        solvers=solvers,
        planted_seed=doc.get("planted_seed", 0),
        image_paths=tuple(images_table.get("paths", ())),
        image_resize_to=images_table.get("resize_to"),
        gd_total_steps=gd_total,
        ssim_enabled=metrics_table.get("ssim", False),
        image_height=metrics_table.get("image_height", 0),
        image_width=metrics_table.get("image_width", 0),
        dynamic_range=metrics_table.get("dynamic_range", 1.0),
        timing=doc.get("timing", "zero"),
        csv_path=output_table.get("csv", "results.csv"),
        json_path=output_table.get("json", "manifest.json"),
    )
    spec.validate()
    return spec


def _build_generator(spec: ExperimentSpec):
    g = spec.generator
    if g.source == "file":
        return load_weights(g.path)
    return random_generator(g.latent_dim, list(g.hidden_dims), g.output_dim,
                            RngStream(g.weight_seed))


def _load_images(spec: ExperimentSpec) -> np.ndarray:
    parts = []
    for p in spec.image_paths:
        if str(p).endswith(".npy"):
            arr = np.load(p)
            if arr.ndim != 2:
                raise SpecValidationError(
                    f"{p}: expected a 2-D (samples, n) array, got ndim={arr.ndim}")
            parts.append(np.asarray(arr, dtype=np.float64))
        else:
            parts.append(load_mnist_idx(p, resize_to=spec.image_resize_to))
    return np.concatenate(parts, axis=0)


def _truth_table(spec, G):
    """Per-seed-index ground-truth signals.

    Planted mode uses a single x* = G(z*) with z* drawn from the planted
    seed; image mode cycles through the loaded images by seed index.
    """
    if spec.mode == PLANTED:
        z_star = RngStream(spec.planted_seed).unit_vector(G.latent_dim)
        x_star = forward(G, z_star)
        return lambda seed_index: x_star
    images = _load_images(spec)
    if images.shape[1] != G.output_dim:
        raise SpecValidationError(
            f"images have {images.shape[1]} pixels but the generator "
            f"outputs {G.output_dim}")
    return lambda seed_index: images[seed_index % images.shape[0]]


def _input_hash(A, y, x0) -> str:
    h = hashlib.sha256()
    for arr in (A, y, x0):
        h.update(np.ascontiguousarray(arr).tobytes())
    return h.hexdigest()


def run_trial(spec: ExperimentSpec, G, x_star, m: int, seed: int,
              solver_names) -> list[TrialRecord]:
    """All requested solvers on one shared (A, y, x0) instance."""
    stream = RngStream(seed).child(m)
    S = make_sensing(m, G.output_dim, stream.child(0))
    obs = observe(S, x_star)
    z0 = stream.child(1).unit_vector(G.latent_dim)
    x0 = forward(G, z0)
    shared_hash = _input_hash(S.A, obs.y, x0)

    ssim_cfg = None
    if spec.ssim_enabled:
        ssim_cfg = SsimConfig(spec.image_height, spec.image_width,
                              spec.dynamic_range)

    records = []
    for name in solver_names:
        cfg = spec.solvers[name]
        rng = stream.child(2, _SOLVER_ORDINAL[name])
        start = time.perf_counter()
        if name == "gd":
            result = gd_baseline(S, obs, G, cfg, rng, x_star=x_star,
                                 x0=x0, z0=z0,
                                 total_steps=spec.gd_total_steps)
        else:
            result = SOLVERS[name](S, obs, G, cfg, rng, x_star=x_star,
                                   x0=x0, z0=z0)
        elapsed = time.perf_counter() - start
        ssim_value = None
        if ssim_cfg is not None:
            corrected = sign_correct(result.x_hat, x_star)
            ssim_value = ssim(corrected, x_star, ssim_cfg)
        records.append(TrialRecord(
            solver=name, m=m, seed=seed,
            final_dist=result.final_dist,
            per_pixel_error=recon_error_per_pixel(result.x_hat, x_star),
            ssim=ssim_value,
            wall_seconds=elapsed if spec.timing == "real" else 0.0,
            wall_seconds_measured=elapsed,
            input_hash=shared_hash,
            loss_trace=[rec.loss for rec in result.trace],
            dist_trace=[rec.dist for rec in result.trace],
        ))
    return records


def run_experiment(spec: ExperimentSpec, threads: int = 1,
                   solver_filter: str | None = None,
                   out_dir=None) -> list[TrialRecord]:
    """Run the full sweep and write the CSV and JSON manifest."""
    spec.validate()
    G = _build_generator(spec)
    if solver_filter and solver_filter != "all":
        if solver_filter not in spec.solvers:
            raise SpecValidationError(
                f"solver {solver_filter!r} not present in the config")
        solver_names = [solver_filter]
    else:
        solver_names = sorted(spec.solvers, key=_SOLVER_ORDINAL.__getitem__)

    truth = _truth_table(spec, G)
    trials = [(m, seed_index, seed)
              for m in spec.measurements
              for seed_index, seed in enumerate(spec.seeds)]

    def one(args):
        m, seed_index, seed = args
        return run_trial(spec, G, truth(seed_index), m, seed, solver_names)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            grouped = list(pool.map(one, trials))
    else:
        grouped = [one(t) for t in trials]

    records = [rec for group in grouped for rec in group]
    # all solvers in one trial must have consumed identical A, y, x0
    for group in grouped:
        hashes = {rec.input_hash for rec in group}
        if len(hashes) != 1:
            raise AssertionError(f"shared-input hash mismatch: {hashes}")

    records.sort(key=lambda r: (r.solver, r.m, r.seed))
    base = Path(out_dir) if out_dir is not None else Path(".")
    base.mkdir(parents=True, exist_ok=True)
    emit_results(records, base / spec.csv_path, base / spec.json_path, spec)
    return records


def _csv_float(v) -> str:
    return "nan" if v is None else repr(float(v))


def emit_results(records, csv_path, json_path, spec: ExperimentSpec) -> None:
    """Write the sorted CSV and the JSON manifest with the resolved spec."""
    if not records:
        raise ValueError("no records to emit")
    rows = sorted(records, key=lambda r: (r.solver, r.m, r.seed))
    lines = [",".join(CSV_COLUMNS)]
    for r in rows:
        lines.append(",".join([
            r.solver, str(r.m), str(r.seed),
            _csv_float(r.final_dist), _csv_float(r.per_pixel_error),
            _csv_float(r.ssim), _csv_float(r.wall_seconds),
        ]))
    Path(csv_path).write_text("\n".join(lines) + "\n", encoding="utf-8")

    spec_dict = dataclasses.asdict(spec)
    spec_dict["generator"] = dataclasses.asdict(spec.generator)
    spec_dict["solvers"] = {k: dataclasses.asdict(v)
                            for k, v in spec.solvers.items()}
    manifest = {
        "genphase_version": __version__,
        "spec": spec_dict,
        "records": [dataclasses.asdict(r) for r in rows],
    }
    Path(json_path).write_text(json.dumps(manifest, indent=2, sort_keys=True),
                               encoding="utf-8")
