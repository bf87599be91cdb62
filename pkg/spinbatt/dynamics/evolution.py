"""
Free evolution and engineered dephasing of the battery state.
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterable, List

from ..core.errors import ConfigurationError, DomainError
from ..spin_core.state import BlochState, Rotation, rotate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FreeEvolutionParams:
    """T1, T2 (s; math.inf disables a channel) and the Larmor frequency (rad/s)"""
    t1: float
    t2: float
    larmor: float

    def __post_init__(self):
        if not (self.t1 > 0 and self.t2 > 0 and self.t2 <= 2.0 * self.t1):
            raise ConfigurationError(f"relaxation times must satisfy 0 < T2 <= 2 T1, got {self}")
        if not math.isfinite(self.larmor):
            raise ConfigurationError(f"Larmor frequency must be finite, got {self.larmor!r}")


@dataclass(frozen=True)
class DephasingChannel:
    """Gradient-field dephasing rate per unit pulse duration (1/s)"""
    gamma_g: float

    def __post_init__(self):
        if not self.gamma_g >= 0:
            raise ConfigurationError(f"dephasing rate must be non-negative, got {self.gamma_g!r}")

    def attenuation(self, tau: float) -> float:
        """Transverse attenuation exp(-gamma_g tau); a full (infinite) pulse gives 0, a zero-length pulse 1"""
        if self.gamma_g == 0 or tau == 0:
            return 1.0
        return math.exp(-self.gamma_g * tau)


def free_evolve(state: BlochState, t: float, p: FreeEvolutionParams) -> BlochState:
    """
    Precession about z by larmor*t (right-handed), transverse decay exp(-t/T2)
    and longitudinal decay exp(-t/T1) toward the unpolarized equilibrium.
    """
    if t < 0:
        raise DomainError(f"evolution time must be non-negative, got {t!r}")
    precessed = rotate(state, Rotation.z(p.larmor * t))
    transverse = math.exp(-t / p.t2)
    longitudinal = math.exp(-t / p.t1)
    return BlochState(
        precessed.sx * transverse,
        precessed.sy * transverse,
        state.sz * longitudinal,
    )


def dephase(state: BlochState, tau: float, ch: DephasingChannel) -> BlochState:
    """Attenuate (sx, sy) by exp(-gamma_g tau); sz passes through untouched"""
    if not tau >= 0:
        raise DomainError(f"gradient-pulse duration must be non-negative, got {tau!r}")
    factor = ch.attenuation(tau)
    return BlochState(state.sx * factor, state.sy * factor, state.sz)


def dephasing_trajectory(state: BlochState, taus: Iterable[float], ch: DephasingChannel) -> List[BlochState]:
    return [dephase(state, tau, ch) for tau in taus]


def calibrated_dephasing(c_start: float, c_end: float) -> float:
    """gamma_g * tau that takes the coherence from c_start to c_end"""
    if not 0 < c_end <= c_start:
        raise DomainError(f"need 0 < c_end <= c_start, got ({c_start}, {c_end})")
    return math.log(c_start / c_end)
