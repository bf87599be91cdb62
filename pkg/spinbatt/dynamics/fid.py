"""
Free-induction-decay signal synthesis.
The probe detects the precessing transverse spin; the synthesized trace is
deterministic, noise is added by the tomography readout.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

from ..core.errors import ConfigurationError
from ..spin_core.state import BlochState
from .evolution import FreeEvolutionParams

logger = logging.getLogger(__name__)

MIN_SAMPLES = 16


@dataclass(frozen=True)
class FidConfig:
    """Sampling of the readout window"""
    sample_rate: float
    duration: float
    amplitude_scale: float = 1.0
    dead_time: float = 0.0

    def __post_init__(self):
        if not (self.sample_rate > 0 and self.duration > 0 and self.amplitude_scale > 0):
            raise ConfigurationError(f"FID sample rate, duration and scale must be positive: {self}")
        if self.dead_time < 0:
            raise ConfigurationError(f"FID dead time must be non-negative: {self}")
        if self.n_samples < MIN_SAMPLES:
            raise ConfigurationError(f"FID window holds {self.n_samples} samples, need >= {MIN_SAMPLES}")

    @property
    def n_samples(self) -> int:
        return int(math.floor(self.sample_rate * self.duration + 1e-9))

    def times(self) -> np.ndarray:
        """Sample times measured from the end of the last pulse"""
        return self.dead_time + np.arange(self.n_samples) / self.sample_rate


@dataclass(frozen=True, eq=False)
class FidTrace:
    """Sampled readout signal"""
    times: np.ndarray
    signal: np.ndarray

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"t": self.times, "signal": self.signal})

    def __len__(self) -> int:
        return len(self.signal)


def fid_signal(state: BlochState, p: FreeEvolutionParams, f: FidConfig) -> FidTrace:
    """y(t) = amplitude_scale * c * exp(-t/T2) * cos(larmor t + phi0), phi0 = atan2(sy, sx)"""
    t = f.times()
    c = state.coherence
    if c == 0:
        return FidTrace(times=t, signal=np.zeros_like(t))
    signal = f.amplitude_scale * c * np.exp(-t / p.t2) * np.cos(p.larmor * t + state.phase)
    return FidTrace(times=t, signal=signal)
