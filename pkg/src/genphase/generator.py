"""Differentiable feedforward ReLU generator networks.

A generator maps a low-dimensional latent code z in R^k to a signal
G(z) in R^n through dense layers with ReLU hidden activations and an
identity output layer. Gradients are computed by hand-rolled reverse-mode
backpropagation; the ReLU derivative at exactly 0 is taken as 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, WeightFormatError
from .rng import RngStream

RELU = "relu"
IDENTITY = "identity"

WEIGHT_FORMAT_VERSION = "1"


@dataclass(frozen=True)
class Layer:
    weight: np.ndarray  # (out, in)
    bias: np.ndarray    # (out,)
    activation: str     # "relu" | "identity"

    def __post_init__(self):
        w = np.asarray(self.weight, dtype=np.float64)
        b = np.asarray(self.bias, dtype=np.float64)
        if w.ndim != 2 or b.ndim != 1 or w.shape[0] != b.shape[0]:
            raise DimensionError(
                f"layer weight {w.shape} incompatible with bias {b.shape}")
        if self.activation not in (RELU, IDENTITY):
            raise ValueError(f"unknown activation {self.activation!r}")
        if not (np.isfinite(w).all() and np.isfinite(b).all()):
            raise ValueError("layer parameters must be finite")
        object.__setattr__(self, "weight", w)
        object.__setattr__(self, "bias", b)


class GeneratorNetwork:
    """Ordered dense layers; hidden ReLU, identity output.

    Immutable after construction; safe to share read-only.
    """

    def __init__(self, layers: list[Layer]):
        if not layers:
            raise DimensionError("a generator needs at least one layer")
        for prev, cur in zip(layers, layers[1:]):
            if cur.weight.shape[1] != prev.weight.shape[0]:
                raise DimensionError(
                    f"layer input width {cur.weight.shape[1]} != "
                    f"previous output width {prev.weight.shape[0]}")
        if layers[-1].activation != IDENTITY:
            raise ValueError("output layer activation must be identity")
        if any(l.activation != RELU for l in layers[:-1]):
            raise ValueError("hidden layer activations must be relu")
        self.layers = list(layers)

    @property
    def latent_dim(self) -> int:
        return self.layers[0].weight.shape[1]

    @property
    def output_dim(self) -> int:
        return self.layers[-1].weight.shape[0]

    @property
    def depth(self) -> int:
        return len(self.layers)


def _check_latent(G: GeneratorNetwork, z) -> np.ndarray:
    z = np.asarray(z, dtype=np.float64)
    if z.shape != (G.latent_dim,):
        raise DimensionError(
            f"latent code has shape {z.shape}, expected ({G.latent_dim},)")
    return z


def forward(G: GeneratorNetwork, z) -> np.ndarray:
    """Evaluate G(z)."""
    a = _check_latent(G, z)
    for layer in G.layers:
        pre = layer.weight @ a + layer.bias
        a = np.maximum(pre, 0.0) if layer.activation == RELU else pre
    return a


def _forward_cached(G: GeneratorNetwork, z):
    """Forward pass keeping inputs and pre-activations for backprop."""
    a = _check_latent(G, z)
    inputs, preacts = [], []
    for layer in G.layers:
        inputs.append(a)
        pre = layer.weight @ a + layer.bias
        preacts.append(pre)
        a = np.maximum(pre, 0.0) if layer.activation == RELU else pre
    return a, inputs, preacts


def backprop(G: GeneratorNetwork, z, cotangent):
    """Reverse pass: returns (dz, [(dW, db) per layer]).

    dz is J_G(z)^T @ cotangent; the per-layer pairs are gradients of
    <cotangent, G(z)> with respect to the layer parameters.
    """
    cot = np.asarray(cotangent, dtype=np.float64)
    if cot.shape != (G.output_dim,):
        raise DimensionError(
            f"cotangent has shape {cot.shape}, expected ({G.output_dim},)")
    _, inputs, preacts = _forward_cached(G, z)
    grads = [None] * len(G.layers)
    d = cot
    for i in range(len(G.layers) - 1, -1, -1):
        layer = G.layers[i]
        if layer.activation == RELU:
            d = d * (preacts[i] > 0.0)  # derivative at 0 taken as 0
        grads[i] = (np.outer(d, inputs[i]), d)
        d = layer.weight.T @ d
    return d, grads


def vjp(G: GeneratorNetwork, z, cotangent) -> np.ndarray:
    """J_G(z)^T @ cotangent."""
    dz, _ = backprop(G, z, cotangent)
    return dz


def grad_inner_loss(G: GeneratorNetwork, z, w) -> np.ndarray:
    """Gradient of ||w - G(z)||^2 with respect to z."""
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (G.output_dim,):
        raise DimensionError(
            f"target has shape {w.shape}, expected ({G.output_dim},)")
    return -2.0 * vjp(G, z, w - forward(G, z))


def random_generator(latent_dim: int, hidden_dims: list[int], output_dim: int,
                     rng: RngStream) -> GeneratorNetwork:
    """He-initialized network: weights N(0, 2/fan_in), biases zero."""
    if latent_dim < 1 or output_dim < 1:
        raise DimensionError("latent_dim and output_dim must be >= 1")
    widths = [latent_dim] + list(hidden_dims) + [output_dim]
    layers = []
    for i in range(len(widths) - 1):
        fan_in, fan_out = widths[i], widths[i + 1]
        w = rng.normal(np.sqrt(2.0 / fan_in), size=(fan_out, fan_in))
        act = IDENTITY if i == len(widths) - 2 else RELU
        layers.append(Layer(w, np.zeros(fan_out), act))
    return GeneratorNetwork(layers)


# Weight documents are JSON. Python's json emits floats with repr(), the
# shortest string that round-trips the exact 64-bit value, so save/load
# is bit-exact.

def save_weights(G: GeneratorNetwork, path) -> None:
    doc = {
        "format_version": WEIGHT_FORMAT_VERSION,
        "latent_dim": G.latent_dim,
        "output_dim": G.output_dim,
        "layers": [
            {
                "rows": l.weight.shape[0],
                "cols": l.weight.shape[1],
                "activation": l.activation,
                "weights": l.weight.ravel().tolist(),
                "bias": l.bias.tolist(),
            }
            for l in G.layers
        ],
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f)


def load_weights(path) -> GeneratorNetwork:
    with open(path, "r", encoding="utf-8") as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as e:
            raise WeightFormatError(f"not valid JSON: {e}") from e
    version = doc.get("format_version")
    if version != WEIGHT_FORMAT_VERSION:
        raise WeightFormatError(
            f"unsupported format version {version!r}, "
            f"expected {WEIGHT_FORMAT_VERSION!r}")
    for field in ("latent_dim", "output_dim", "layers"):
        if field not in doc:
            raise WeightFormatError(f"missing field {field!r}")
    layers = []
    for i, spec in enumerate(doc["layers"]):
        try:
            rows, cols = int(spec["rows"]), int(spec["cols"])
            weights, bias = spec["weights"], spec["bias"]
            activation = spec["activation"]
        except (KeyError, TypeError) as e:
            raise WeightFormatError(f"layer {i} malformed: {e}") from e
        if len(weights) != rows * cols:
            raise WeightFormatError(
                f"layer {i}: {len(weights)} weights, declared {rows}x{cols}")
        if len(bias) != rows:
            raise WeightFormatError(
                f"layer {i}: bias length {len(bias)}, declared {rows} rows")
        if activation not in (RELU, IDENTITY):
            raise WeightFormatError(
                f"layer {i}: unknown activation {activation!r}")
        w = np.asarray(weights, dtype=np.float64).reshape(rows, cols)
        layers.append(Layer(w, np.asarray(bias, dtype=np.float64), activation))
    try:
        G = GeneratorNetwork(layers)
    except (DimensionError, ValueError) as e:
        raise WeightFormatError(str(e)) from e
    if G.latent_dim != doc["latent_dim"] or G.output_dim != doc["output_dim"]:
        raise WeightFormatError(
            f"declared dims ({doc['latent_dim']}, {doc['output_dim']}) do not "
            f"match layers ({G.latent_dim}, {G.output_dim})")
    return G
