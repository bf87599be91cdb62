"""
Two-level state tomography from FID readouts.

Coherences come from the FID of the state itself: the fitted amplitude and
phase at pulse end give (sx, sy). Populations come from the FID after an
R_x(pi/2) pulse, which maps (sx, sy, sz) to (sx, -sz, sy); the transverse
component along -y then carries sz, and its sign is read from the fitted phase.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from ..core.errors import InconsistentReconstructionError, NoSignalError
from ..dynamics.evolution import FreeEvolutionParams
from ..dynamics.fid import FidConfig
from ..spin_core.state import BlochState, EnsembleConfig, Rotation, rotate
from .fitting import FidFitResult, fit_fid
from .readout import NoiseModel, simulate_readout

logger = logging.getLogger(__name__)

LENGTH_SLACK = 1e-6
N_SIGMA = 3.0


@dataclass(frozen=True)
class PopulationEstimate:
    """Signed sz; detected is False when no population signal was found"""
    sz: float
    std_error: float
    detected: bool = True


@dataclass(frozen=True)
class TomographyResult:
    """Reconstructed battery state and its capacity (J)"""
    bloch: BlochState
    std_errors: Tuple[float, float, float]
    capacity: float
    coherent_capacity: float
    incoherent_capacity: float
    lambda_plus: float
    lambda_minus: float

    def to_dict(self) -> Dict[str, object]:
        return {
            "bloch": [self.bloch.sx, self.bloch.sy, self.bloch.sz],
            "std_errors": list(self.std_errors),
            "capacity": self.capacity,
            "coherent_capacity": self.coherent_capacity,
            "incoherent_capacity": self.incoherent_capacity,
            "lambda_plus": self.lambda_plus,
            "lambda_minus": self.lambda_minus,
        }


def population_readout(rotated: BlochState, env: FreeEvolutionParams, f: FidConfig,
                       n: NoiseModel) -> PopulationEstimate:
    """sz of the pre-pulse state from the FID of a state already rotated by R_x(pi/2)"""
    try:
        fit = fit_fid(simulate_readout(rotated, env, f, n), f)
    except NoSignalError:
        logger.info("No population signal detected; reporting sz = 0")
        return PopulationEstimate(sz=0.0, std_error=0.0, detected=False)
    scale = f.amplitude_scale
    sin_phi, cos_phi = math.sin(fit.phase), math.cos(fit.phase)
    sz = -fit.amplitude * sin_phi / scale
    error = math.hypot(sin_phi * fit.amplitude_error, fit.amplitude * cos_phi * fit.phase_error) / scale
    return PopulationEstimate(sz=sz, std_error=error)


def measure_population(state: BlochState, env: FreeEvolutionParams, f: FidConfig,
                       n: NoiseModel) -> PopulationEstimate:
    return population_readout(rotate(state, Rotation.x(0.5 * math.pi)), env, f, n)


def measure_coherence(state: BlochState, env: FreeEvolutionParams, f: FidConfig,
                      n: NoiseModel) -> Optional[FidFitResult]:
    """FID fit of the transverse spin, or None when no signal rises above the noise"""
    try:
        return fit_fid(simulate_readout(state, env, f, n), f)
    except NoSignalError:
        logger.info("No coherence signal detected")
        return None


def reconstruct_state(coherence_fit: Optional[FidFitResult], population: PopulationEstimate,
                      f: FidConfig, cfg: EnsembleConfig) -> TomographyResult:
    scale = f.amplitude_scale
    if coherence_fit is None:
        sx = sy = 0.0
        err_x = err_y = 0.0
    else:
        a, phi = coherence_fit.amplitude, coherence_fit.phase
        sx = a * math.cos(phi) / scale
        sy = a * math.sin(phi) / scale
        err_x = math.hypot(math.cos(phi) * coherence_fit.amplitude_error, a * math.sin(phi) * coherence_fit.phase_error) / scale
        err_y = math.hypot(math.sin(phi) * coherence_fit.amplitude_error, a * math.cos(phi) * coherence_fit.phase_error) / scale
    vector = np.array([sx, sy, population.sz])
    errors = (err_x, err_y, population.std_error)

    length = float(np.linalg.norm(vector))
    if length > 1.0:
        length_error = float(np.sqrt(np.sum((vector * np.array(errors)) ** 2))) / length
        if length - 1.0 > max(N_SIGMA * length_error, LENGTH_SLACK):
            logger.error(f"Reconstructed Bloch length {length:.6f} exceeds 1 by more than {N_SIGMA} sigma")
            raise InconsistentReconstructionError(
                f"reconstructed Bloch length {length!r} exceeds 1 (std error {length_error!r})"
            )
        vector = vector / length
    bloch = BlochState.from_vector(vector)

    k = cfg.energy_scale
    s = bloch.length
    return TomographyResult(
        bloch=bloch,
        std_errors=errors,
        capacity=k * s,
        coherent_capacity=k * bloch.coherence,
        incoherent_capacity=k * abs(bloch.sz),
        lambda_plus=0.5 * (1.0 + s),
        lambda_minus=0.5 * (1.0 - s),
    )


def tomograph(state: BlochState, env: FreeEvolutionParams, f: FidConfig, n: NoiseModel,
              cfg: EnsembleConfig) -> TomographyResult:
    """Coherence readout with the model's seed, population readout with the next one"""
    coherence = measure_coherence(state, env, f, n)
    population = measure_population(state, env, f, n.offset(1))
    return reconstruct_state(coherence, population, f, cfg)
