"""Phase retrieval under generative priors.

Solvers (APPGD, APGD and a latent gradient-descent baseline) for
recovering a signal from magnitude-only Gaussian measurements when the
signal lies in the range of a feedforward ReLU generator, plus metrics
and a reproducible experiment harness.
"""

__version__ = "0.1.0"

from .errors import (DimensionError, DivergenceError, SpecValidationError,
                     WeightFormatError)
from .generator import (GeneratorNetwork, Layer, forward, grad_inner_loss,
                        load_weights, random_generator, save_weights, vjp)
from .glo import GloResult, train_glo
from .linalg import gaussian_matrix, matvec, matvec_transpose
from .metrics import (SsimConfig, dist_up_to_sign, recon_error_per_pixel,
                      sign_correct, ssim)
from .rng import RngStream
from .sensing import Observation, SensingModel, make_sensing, observe
from .solvers import (IterationRecord, RecoveryResult, SolverConfig, apgd,
                      appgd, gd_baseline, gradient_step, phase_update,
                      project, sign_plus)

__all__ = [
    "DimensionError", "DivergenceError", "SpecValidationError",
    "WeightFormatError", "GeneratorNetwork", "Layer", "forward",
    "grad_inner_loss", "load_weights", "random_generator", "save_weights",
    "vjp", "GloResult", "train_glo", "gaussian_matrix", "matvec",
    "matvec_transpose", "SsimConfig", "dist_up_to_sign",
    "recon_error_per_pixel", "sign_correct", "ssim", "RngStream",
    "Observation", "SensingModel", "make_sensing", "observe",
    "IterationRecord", "RecoveryResult", "SolverConfig", "apgd", "appgd",
    "gd_baseline", "gradient_step", "phase_update", "project", "sign_plus",
]
