import numpy as np
import pytest

from genphase import RngStream, forward, make_sensing, observe, random_generator

# Pinned planted-recovery suite: He-initialized 8 -> 32 -> 128 generator
# (weight seed 1), true latent from seed 7. All empirical thresholds in
# the tests were fixed by pilot runs against exactly this instance.
PLANTED_WEIGHT_SEED = 1
PLANTED_LATENT_SEED = 7
PLANTED_K = 8
PLANTED_HIDDEN = [32]
PLANTED_N = 128


@pytest.fixture(scope="session")
def planted_generator():
    return random_generator(PLANTED_K, PLANTED_HIDDEN, PLANTED_N,
                            RngStream(PLANTED_WEIGHT_SEED))


@pytest.fixture(scope="session")
def planted_signal(planted_generator):
    z_star = RngStream(PLANTED_LATENT_SEED).unit_vector(PLANTED_K)
    return forward(planted_generator, z_star)


def planted_trial(G, x_star, seed, m):
    """Shared (sensing, observation, init) for one planted trial."""
    stream = RngStream(seed).child(m)
    S = make_sensing(m, G.output_dim, stream.child(0))
    obs = observe(S, x_star)
    z0 = stream.child(1).unit_vector(G.latent_dim)
    x0 = forward(G, z0)
    return stream, S, obs, z0, x0
