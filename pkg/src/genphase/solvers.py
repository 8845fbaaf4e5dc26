"""Recovery solvers for magnitude-only measurements under a generative prior.

Three algorithms share the same primitives:

* alternating-phase projected gradient descent (``appgd``): per outer
  iteration, re-estimate the measurement signs, take one ambient-space
  gradient step on ||y*p - A x||^2, then project onto the generator's
  range by inner gradient descent on ||w - G(z)||^2;
* alternating-phase gradient descent (``apgd``): re-estimate the signs,
  then minimize ||y*p - A G(z)||^2 over the latent code directly;
* plain latent gradient descent (``gd_baseline``): one long descent on
  the non-smooth loss ||y - |A G(z)|||^2.

Sign conventions: sign(0) is +1 everywhere. Recovery is only defined up
to a global sign flip, so diagnostics use min(||a-b||, ||a+b||).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, DivergenceError
from .generator import GeneratorNetwork, forward, vjp
from .metrics import dist_up_to_sign
from .rng import RngStream
from .sensing import Observation, SensingModel

FRESH_RANDOM = "fresh_random"
WARM_START = "warm_start"

# iterations with dist below this are excluded from contraction ratios
CONTRACTION_DIST_FLOOR = 1e-6


@dataclass(frozen=True)
class SolverConfig:
    outer_steps: int = 50          # number of phase/descent/projection rounds
    inner_steps: int = 500         # latent descent steps per round
    step_size: float = 0.9         # ambient-space learning rate
    inner_step_size: float = 0.01  # latent-space learning rate
    z_init_policy: str = FRESH_RANDOM
    warmup_steps: int = 1          # ambient gradient steps before the first projection

    def __post_init__(self):
        if self.outer_steps < 1 or self.inner_steps < 1:
            raise ValueError("iteration counts must be >= 1")
        if self.step_size <= 0 or self.inner_step_size <= 0:
            raise ValueError("step sizes must be positive")
        if self.z_init_policy not in (FRESH_RANDOM, WARM_START):
            raise ValueError(f"unknown z_init_policy {self.z_init_policy!r}")
        if self.warmup_steps < 1:
            raise ValueError("warmup_steps must be >= 1")


@dataclass
class IterationRecord:
    """Snapshot at the start of one outer iteration.

    `x` is the current iterate, `p` its measurement signs, `w` the
    post-gradient pre-projection point (None for solvers without an
    ambient step), `loss` = ||y*p - A x||^2. The diagnostics fields are
    populated only when the true signal is supplied.
    """
    x: np.ndarray
    p: np.ndarray
    w: np.ndarray | None
    loss: float
    z: np.ndarray | None = None
    dist: float | None = None
    phase_noise: float | None = None
    contraction: float | None = None


@dataclass
class RecoveryResult:
    x_hat: np.ndarray
    z_hat: np.ndarray
    trace: list[IterationRecord] = field(default_factory=list)
    final_dist: float | None = None


def sign_plus(u: np.ndarray) -> np.ndarray:
    """Elementwise sign with sign(0) := +1."""
    return np.where(u >= 0.0, 1.0, -1.0)


def phase_update(S: SensingModel, x) -> np.ndarray:
    """Current estimate of the measurement signs: sign(A x)."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (S.n,):
        raise DimensionError(f"x has shape {x.shape}, expected ({S.n},)")
    return sign_plus(S.A @ x)


def gradient_step(x, S: SensingModel, y, p, step_size: float) -> np.ndarray:
    """One ambient step: x + step_size * A^T (y*p - A x)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    p = np.asarray(p, dtype=np.float64)
    if x.shape != (S.n,) or y.shape != (S.m,) or p.shape != (S.m,):
        raise DimensionError(
            f"gradient_step shapes x={x.shape} y={y.shape} p={p.shape} "
            f"vs sensing ({S.m}, {S.n})")
    if step_size <= 0:
        raise ValueError("step_size must be positive")
    return x + step_size * (S.A.T @ (y * p - S.A @ x))


def project(G: GeneratorNetwork, w, inner_steps: int, inner_step_size: float,
            z0) -> tuple[np.ndarray, np.ndarray]:
    """Approximate projection of w onto the range of G.

    Runs `inner_steps` plain gradient-descent steps on ||w - G(z)||^2
    from z0 and returns (G(z), z) for the lowest-loss z seen along the
    trajectory (inner GD on a non-convex loss can overshoot).
    """
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (G.output_dim,):
        raise DimensionError(f"w has shape {w.shape}, expected ({G.output_dim},)")
    z = np.asarray(z0, dtype=np.float64).copy()
    r = w - forward(G, z)
    best_z, best_loss = z.copy(), float(r @ r)
    for i in range(inner_steps):
        z = z + 2.0 * inner_step_size * vjp(G, z, r)
        r = w - forward(G, z)
        loss = float(r @ r)
        if not np.isfinite(loss):
            raise DivergenceError("projection descent diverged", i)
        if loss < best_loss:
            best_z, best_loss = z.copy(), loss
    return forward(G, best_z), best_z


def grad_measurement_loss(G: GeneratorNetwork, z, S: SensingModel,
                          target) -> np.ndarray:
    """Gradient of ||target - A G(z)||^2 with respect to z."""
    target = np.asarray(target, dtype=np.float64)
    if target.shape != (S.m,):
        raise DimensionError(
            f"target has shape {target.shape}, expected ({S.m},)")
    residual = target - S.A @ forward(G, z)
    return -2.0 * vjp(G, z, S.A.T @ residual)


def _initial_point(G, cfg, rng, x0, z0):
    if x0 is not None:
        x0 = np.asarray(x0, dtype=np.float64)
        z = None if z0 is None else np.asarray(z0, dtype=np.float64)
        return x0, z
    z = rng.unit_vector(G.latent_dim) if z0 is None else np.asarray(z0, float)
    return forward(G, z), z


def _aligned_true_phase(S, x_star, x):
    """Signs of A x* with the global sign chosen to match x's branch."""
    s = 1.0 if np.linalg.norm(x - x_star) <= np.linalg.norm(x + x_star) else -1.0
    return sign_plus(S.A @ (s * x_star))


def _start_record(S, obs, x, p, w, x_star, z=None):
    loss = float(np.sum((obs.y * p - S.A @ x) ** 2))
    rec = IterationRecord(x=x, p=p, w=w, loss=loss, z=z)
    if x_star is not None:
        rec.dist = dist_up_to_sign(x, x_star)
        e = (p - _aligned_true_phase(S, x_star, x)) * obs.y
        rec.phase_noise = float(np.linalg.norm(e))
    return rec


def _finalize(result: RecoveryResult, x_star):
    """Fill final dist and per-iteration contraction ratios."""
    if x_star is None:
        return result
    result.final_dist = dist_up_to_sign(result.x_hat, x_star)
    dists = [rec.dist for rec in result.trace] + [result.final_dist]
    for rec, d_now, d_next in zip(result.trace, dists, dists[1:]):
        if d_now > CONTRACTION_DIST_FLOOR:
            rec.contraction = d_next / d_now
    return result


def _check_problem(S: SensingModel, obs: Observation, G: GeneratorNetwork):
    if obs.y.shape != (S.m,):
        raise DimensionError(
            f"observation length {obs.y.shape[0]} != m={S.m}")
    if G.output_dim != S.n:
        raise DimensionError(
            f"generator output dim {G.output_dim} != signal dim {S.n}")


def _measurement_loss(S, obs, x) -> float:
    return float(np.sum((obs.y - np.abs(S.A @ x)) ** 2))


def appgd(S: SensingModel, obs: Observation, G: GeneratorNetwork,
          cfg: SolverConfig, rng: RngStream, x_star=None,
          x0=None, z0=None) -> RecoveryResult:
    """Alternating-phase projected gradient descent (phase / step / project).

    Runs a fixed number of outer iterations and returns the most
    measurement-consistent iterate seen (lowest ||y - |A x|||^2): the
    non-convex projection can regress on late iterations even after the
    trajectory has visited the solution.
    """
    _check_problem(S, obs, G)
    x, z = _initial_point(G, cfg, rng, x0, z0)
    trace = []
    best = (_measurement_loss(S, obs, x), x, z)
    for t in range(cfg.outer_steps):
        p = phase_update(S, x)
        w = x
        for _ in range(cfg.warmup_steps if t == 0 else 1):
            w = gradient_step(w, S, obs.y, p, cfg.step_size)
        trace.append(_start_record(S, obs, x, p, w, x_star, z=z))
        if cfg.z_init_policy == WARM_START and z is not None:
            z_start = z
        else:
            z_start = rng.unit_vector(G.latent_dim)
        x, z = project(G, w, cfg.inner_steps, cfg.inner_step_size, z_start)
        ml = _measurement_loss(S, obs, x)
        if ml < best[0]:
            best = (ml, x, z)
    return _finalize(
        RecoveryResult(x_hat=best[1], z_hat=best[2], trace=trace), x_star)


def apgd(S: SensingModel, obs: Observation, G: GeneratorNetwork,
         cfg: SolverConfig, rng: RngStream, x_star=None,
         x0=None, z0=None) -> RecoveryResult:
    """Alternating-phase gradient descent in latent space.

    As with appgd, the returned estimate is the most measurement-consistent
    outer iterate rather than the last one.
    """
    _check_problem(S, obs, G)
    x, z = _initial_point(G, cfg, rng, x0, z0)
    trace = []
    best = (_measurement_loss(S, obs, x), x, z)
    for t in range(cfg.outer_steps):
        p = phase_update(S, x)
        target = p * obs.y
        trace.append(_start_record(S, obs, x, p, None, x_star, z=z))
        if cfg.z_init_policy == WARM_START and z is not None:
            zc = z.copy()
        else:
            zc = rng.unit_vector(G.latent_dim)
        residual = target - S.A @ forward(G, zc)
        best_z, best_loss = zc.copy(), float(residual @ residual)
        for i in range(cfg.inner_steps):
            zc = zc + 2.0 * cfg.inner_step_size * vjp(G, zc, S.A.T @ residual)
            residual = target - S.A @ forward(G, zc)
            loss = float(residual @ residual)
            if not np.isfinite(loss):
                raise DivergenceError("latent descent diverged", i)
            if loss < best_loss:
                best_z, best_loss = zc.copy(), loss
        z = best_z
        x = forward(G, z)
        ml = _measurement_loss(S, obs, x)
        if ml < best[0]:
            best = (ml, x, z)
    return _finalize(
        RecoveryResult(x_hat=best[1], z_hat=best[2], trace=trace), x_star)


def gd_baseline(S: SensingModel, obs: Observation, G: GeneratorNetwork,
                cfg: SolverConfig, rng: RngStream, x_star=None,
                x0=None, z0=None, total_steps: int | None = None) -> RecoveryResult:
    """Plain latent gradient descent on ||y - |A G(z)|||^2.

    Runs `total_steps` updates (default outer_steps * inner_steps) as one
    optimization; the trace records one snapshot per `inner_steps`-sized
    chunk so traces are comparable across solvers. Returns the
    lowest-loss iterate seen along the descent.
    """
    _check_problem(S, obs, G)
    if z0 is None:
        z = rng.unit_vector(G.latent_dim)
    else:
        z = np.asarray(z0, dtype=np.float64).copy()
    if total_steps is None:
        total_steps = cfg.outer_steps * cfg.inner_steps
    chunk = cfg.inner_steps
    trace = []
    x = forward(G, z)
    best = (_measurement_loss(S, obs, x), x, z)
    for i in range(total_steps):
        if i % chunk == 0:
            p = phase_update(S, x)
            trace.append(_start_record(S, obs, x, p, None, x_star, z=z))
        u = S.A @ x
        # d||y - |u|||^2/du = -2 (y - |u|) * sign(u), sign(0) := +1
        cot = S.A.T @ ((obs.y - np.abs(u)) * sign_plus(u))
        grad = -2.0 * vjp(G, z, cot)
        z = z - cfg.inner_step_size * grad
        x = forward(G, z)
        loss = _measurement_loss(S, obs, x)
        if not np.isfinite(loss):
            raise DivergenceError("gradient descent baseline diverged", i)
        if loss < best[0]:
            best = (loss, x, z)
    return _finalize(
        RecoveryResult(x_hat=best[1], z_hat=best[2], trace=trace), x_star)


SOLVERS = {"appgd": appgd, "apgd": apgd, "gd": gd_baseline}
