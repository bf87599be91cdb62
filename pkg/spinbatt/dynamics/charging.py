"""
Charging model of the effective two-level battery.
Pump/relax capacity growth, the spin-temperature steady state, and the state-level
Pump operation used by pulse sequences.
"""

import logging
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from ..core.errors import ConfigurationError, DomainError
from ..spin_core.state import BlochState, EnsembleConfig

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class PumpRelaxParams:
    """Optical pumping rate and total relaxation rate (1/s)"""
    r_op: float
    r_rel: float

    def __post_init__(self):
        if self.r_op < 0 or self.r_rel < 0 or self.r_op + self.r_rel <= 0:
            raise ConfigurationError(f"invalid pump/relax rates {self}")

    @property
    def target_polarization(self) -> float:
        """Plateau polarization r_op / (r_op + r_rel)"""
        return self.r_op / (self.r_op + self.r_rel)

    @property
    def approach_rate(self) -> float:
        """Exponent rate r_op/2 + r_rel"""
        return 0.5 * self.r_op + self.r_rel


def capacity_vs_time(t: ArrayLike, p: PumpRelaxParams, cfg: EnsembleConfig) -> ArrayLike:
    """C(t) = k r_op/(r_op + r_rel) [1 - exp(-(r_op/2 + r_rel) t)]"""
    times = np.asarray(t, dtype=float)
    if np.any(times < 0) or np.any(np.isnan(times)):
        raise DomainError(f"charging time must be non-negative, got {t!r}")
    capacity = cfg.energy_scale * p.target_polarization * -np.expm1(-p.approach_rate * times)
    return float(capacity) if capacity.ndim == 0 else capacity


def spin_temperature(polarization: float) -> float:
    """beta = ln((1 + P)/(1 - P)); infinite at P = 1"""
    if not 0.0 <= polarization <= 1.0:
        raise DomainError(f"polarization must lie in [0, 1], got {polarization!r}")
    if polarization == 1.0:
        return math.inf
    return math.log1p(polarization) - math.log1p(-polarization)


def polarization(beta: float) -> float:
    """P = tanh(beta / 2)"""
    return math.tanh(0.5 * beta)


def steady_state_capacity(polarization_value: float, cfg: EnsembleConfig) -> float:
    """C_ss = k tanh(beta/2), cross-checked against the identity C_ss = k P"""
    beta = spin_temperature(polarization_value)
    via_beta = cfg.energy_scale * polarization(beta)
    direct = cfg.energy_scale * polarization_value
    if not math.isclose(via_beta, direct, rel_tol=1e-12, abs_tol=1e-12 * cfg.energy_scale):
        logger.warning(f"Spin-temperature path {via_beta} disagrees with k*P = {direct}")
    return via_beta


def pump(state: BlochState, duration: float, p: PumpRelaxParams) -> BlochState:
    """
    Relax the Bloch vector toward (0, 0, P_target) at rate r_op/2 + r_rel.
    From the unpolarized state this reproduces capacity_vs_time exactly.
    """
    if duration < 0:
        raise DomainError(f"pump duration must be non-negative, got {duration!r}")
    decay = math.exp(-p.approach_rate * duration)
    target = p.target_polarization
    return BlochState(
        state.sx * decay,
        state.sy * decay,
        target + (state.sz - target) * decay,
    )
