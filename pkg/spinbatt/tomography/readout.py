"""
Simulated Faraday readout: the deterministic FID plus additive white Gaussian noise.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from ..core.errors import ConfigurationError
from ..dynamics.evolution import FreeEvolutionParams
from ..dynamics.fid import FidConfig, FidTrace, fid_signal
from ..spin_core.state import BlochState

logger = logging.getLogger(__name__)

SEED_MODULUS = 2 ** 64


@dataclass(frozen=True)
class NoiseModel:
    """Gaussian noise of standard deviation sigma (signal units); a seed fixes the realization"""
    sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and self.sigma >= 0):
            raise ConfigurationError(f"noise sigma must be finite and non-negative, got {self.sigma!r}")
        if not 0 <= self.seed < SEED_MODULUS:
            raise ConfigurationError(f"noise seed must be a 64-bit unsigned integer, got {self.seed!r}")

    def offset(self, k: int) -> "NoiseModel":
        """Same sigma, seed advanced by k (wrapping at 2**64)"""
        return NoiseModel(sigma=self.sigma, seed=(self.seed + k) % SEED_MODULUS)

    def sample(self, n: int) -> np.ndarray:
        if self.sigma == 0:
            return np.zeros(n)
        return np.random.default_rng(self.seed).normal(0.0, self.sigma, size=n)


def simulate_readout(state: BlochState, env: FreeEvolutionParams, f: FidConfig, n: NoiseModel) -> FidTrace:
    clean = fid_signal(state, env, f)
    return FidTrace(times=clean.times, signal=clean.signal + n.sample(len(clean)))
