"""
Shared fixtures: the reference ensemble and seeded random battery states.
"""

import numpy as np
import pytest

from spinbatt.core.units import RB87_GYROMAGNETIC_RATIO
from spinbatt.hyperfine.operators import HyperfineParams, build_operators
from spinbatt.spin_core.state import BlochState, EnsembleConfig

SEED = 20240601
N_RANDOM_STATES = 10_000
REFERENCE_SCALE_EV = 49.8


def random_bloch_vectors(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniform directions with lengths spread over [0, 1]"""
    directions = rng.normal(size=(n, 3))
    directions /= np.linalg.norm(directions, axis=1)[:, None]
    lengths = rng.uniform(0.0, 1.0, size=n)
    return directions * lengths[:, None]


def random_density(rng: np.random.Generator, dim: int = 8) -> np.ndarray:
    """Random full-rank density matrix G G^dagger / Tr"""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


@pytest.fixture
def ensemble():
    return EnsembleConfig.from_energy_scale(REFERENCE_SCALE_EV, n_atoms=1e12, gamma=RB87_GYROMAGNETIC_RATIO)


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture
def random_states(rng):
    vectors = random_bloch_vectors(rng, N_RANDOM_STATES)
    vectors[0] = (0.0, 0.0, 0.0)
    vectors[1] = (0.0, 0.0, 1.0)
    return [BlochState.from_vector(v) for v in vectors]


@pytest.fixture
def hyperfine_params():
    return HyperfineParams()


@pytest.fixture
def ops(hyperfine_params):
    return build_operators(hyperfine_params)
