"""Minimal GLO-style generator training.

Jointly optimizes the network parameters and one latent code per sample
under squared reconstruction loss, by per-sample SGD. Latent codes are
initialized on the unit sphere and projected back into the unit ball
after every update.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DivergenceError
from .generator import GeneratorNetwork, Layer, backprop, forward, random_generator
from .rng import RngStream


@dataclass
class GloResult:
    network: GeneratorNetwork
    latents: np.ndarray          # (num_samples, k), each with norm <= 1
    epoch_losses: list[float] = field(default_factory=list)


def _project_unit_ball(z: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(z)
    return z / norm if norm > 1.0 else z


def train_glo(dataset, latent_dim: int, hidden_dims: list[int], epochs: int,
              weight_step: float, latent_step: float, rng: RngStream) -> GloResult:
    """Train a generator on `dataset` (list/array of equal-length vectors).

    Returns the trained network, the per-sample latent codes and the mean
    squared loss recorded per epoch. Raises DivergenceError (with the
    epoch index) if the loss goes non-finite.
    """
    data = np.asarray(dataset, dtype=np.float64)
    if data.ndim != 2 or data.shape[0] == 0:
        raise ValueError("dataset must be a nonempty list of equal-length vectors")
    num_samples, n = data.shape

    G = random_generator(latent_dim, hidden_dims, n, rng.child(0))
    weights = [l.weight.copy() for l in G.layers]
    biases = [l.bias.copy() for l in G.layers]
    acts = [l.activation for l in G.layers]

    init_rng = rng.child(1)
    latents = np.stack([init_rng.unit_vector(latent_dim)
                        for _ in range(num_samples)])

    order_rng = rng.child(2)
    epoch_losses = []
    for epoch in range(epochs):
        total = 0.0
        for idx in order_rng.permutation(num_samples):
            net = GeneratorNetwork(
                [Layer(w, b, a) for w, b, a in zip(weights, biases, acts)])
            z = latents[idx]
            residual = data[idx] - forward(net, z)
            total += float(residual @ residual)
            dz, grads = backprop(net, z, -2.0 * residual)
            for (dw, db), w, b in zip(grads, weights, biases):
                w -= weight_step * dw
                b -= weight_step * db
            latents[idx] = _project_unit_ball(z - latent_step * dz)
        mean_loss = total / num_samples
        if not np.isfinite(mean_loss):
            raise DivergenceError("GLO training diverged", epoch)
        epoch_losses.append(mean_loss)

    trained = GeneratorNetwork(
        [Layer(w, b, a) for w, b, a in zip(weights, biases, acts)])
    return GloResult(trained, latents, epoch_losses)
