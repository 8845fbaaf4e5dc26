"""Command-line entry points.

    genphase run --config sweep.toml [--out-dir out] [--threads N] [--solver appgd]
    genphase project --weights gen.json --input vec.txt [--output out.txt]
    genphase train-glo --data images.npy --config train.toml

GENPHASE_THREADS sets the default trial-parallelism for `run`.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .errors import SpecValidationError
from .experiment import load_spec, run_experiment
from .generator import load_weights, save_weights
from .glo import train_glo
from .mnist import load_mnist_idx
from .rng import RngStream
from .solvers import project


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("GENPHASE_THREADS", "1")))
    except ValueError:
        return 1


def _read_vector(path) -> np.ndarray:
    """One decimal number per line, UTF-8."""
    with open(path, "r", encoding="utf-8") as f:
        return np.array([float(line) for line in f if line.strip()])


def _cmd_run(args) -> int:
    spec = load_spec(args.config)
    records = run_experiment(spec, threads=args.threads,
                             solver_filter=args.solver, out_dir=args.out_dir)
    print(f"{len(records)} trial records written "
          f"({spec.csv_path}, {spec.json_path})")
    return 0


def _cmd_project(args) -> int:
    G = load_weights(args.weights)
    w = _read_vector(args.input)
    z0 = RngStream(args.seed).unit_vector(G.latent_dim)
    x, z = project(G, w, args.steps, args.step_size, z0)
    out = sys.stdout if args.output is None else open(args.output, "w")
    try:
        for v in x:
            print(repr(float(v)), file=out)
    finally:
        if args.output is not None:
            out.close()
    print(f"residual ||w - G(z)|| = {np.linalg.norm(w - x):.6g}",
          file=sys.stderr)
    return 0


def _cmd_train_glo(args) -> int:
    if sys.version_info >= (3, 11):
        import tomllib
    else:
        import tomli as tomllib
    with open(args.config, "rb") as f:
        cfg = tomllib.load(f)
    if str(args.data).endswith(".npy"):
        data = np.load(args.data)
    else:
        data = load_mnist_idx(args.data, resize_to=cfg.get("resize_to"))
    result = train_glo(
        data,
        latent_dim=cfg["latent_dim"],
        hidden_dims=list(cfg.get("hidden_dims", [])),
        epochs=cfg.get("epochs", 100),
        weight_step=cfg.get("weight_step", 1e-3),
        latent_step=cfg.get("latent_step", 1e-2),
        rng=RngStream(cfg.get("seed", 0)),
    )
    save_weights(result.network, cfg.get("weights_out", "generator.json"))
    print(f"final epoch loss {result.epoch_losses[-1]:.6g}; "
          f"weights -> {cfg.get('weights_out', 'generator.json')}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="genphase",
        description="Phase retrieval under generative priors")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment sweep")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--out-dir", default=None)
    p_run.add_argument("--threads", type=int, default=_default_threads())
    p_run.add_argument("--solver", default="all",
                       choices=["appgd", "apgd", "gd", "all"])
    p_run.set_defaults(func=_cmd_run)

    p_proj = sub.add_parser("project",
                            help="project a vector onto a generator's range")
    p_proj.add_argument("--weights", required=True)
    p_proj.add_argument("--input", required=True)
    p_proj.add_argument("--output", default=None)
    p_proj.add_argument("--steps", type=int, default=500)
    p_proj.add_argument("--step-size", type=float, default=0.01)
    p_proj.add_argument("--seed", type=int, default=0)
    p_proj.set_defaults(func=_cmd_project)

    p_glo = sub.add_parser("train-glo", help="train a generator (GLO-style)")
    p_glo.add_argument("--data", required=True)
    p_glo.add_argument("--config", required=True)
    p_glo.set_defaults(func=_cmd_train_glo)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SpecValidationError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
