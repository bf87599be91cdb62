"""
Hierarchical coarse-to-fine traversal of the rotation control space.

The internal energy is evaluated after R_z(alpha) followed by R_x(beta) (and
optionally R_y(gamma)) on a coarse periodic grid; windows around the best
maximum and minimum cells are then re-scanned at the fine step. A window
whose coarse cell is flat in alpha takes its alpha from the best cell where
alpha matters. The extremes
over every evaluated point give the operational capacity e_max - e_min.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np
import pandas as pd
from scipy.spatial.transform import Rotation as _SciPyRotation

from ..core.errors import ConfigurationError
from ..spin_core.energetics import capacity_exact
from ..spin_core.state import BlochState, EnsembleConfig

logger = logging.getLogger(__name__)

FULL_TURN = 360.0
TIE_TOL = 1e-12


@dataclass(frozen=True)
class ScanConfig:
    """Grid steps and fine-window half-width (degrees)"""
    coarse_step: float = 20.0
    fine_step: float = 5.0
    fine_window: Optional[float] = None
    three_axis: bool = False

    def __post_init__(self):
        if not (math.isfinite(self.coarse_step) and 0 < self.coarse_step <= FULL_TURN):
            raise ConfigurationError(f"coarse step must lie in (0, 360] deg, got {self.coarse_step!r}: empty grid")
        if not (math.isfinite(self.fine_step) and 0 < self.fine_step <= self.coarse_step):
            raise ConfigurationError(f"fine step must satisfy 0 < fine_step <= coarse_step, got {self.fine_step!r}")
        if self.window < 0.5 * self.coarse_step:
            raise ConfigurationError(
                f"fine window {self.window!r} deg does not cover a coarse cell of {self.coarse_step!r} deg"
            )

    @property
    def window(self) -> float:
        return self.coarse_step if self.fine_window is None else self.fine_window

    @property
    def n_angles(self) -> int:
        return 3 if self.three_axis else 2

    def coarse_axis(self) -> np.ndarray:
        return np.arange(0.0, FULL_TURN - 1e-9, self.coarse_step)

    def fine_offsets(self) -> np.ndarray:
        half = int(math.floor(self.window / self.fine_step + 1e-9))
        return self.fine_step * np.arange(-half, half + 1)

    @property
    def coarse_size(self) -> int:
        return len(self.coarse_axis()) ** self.n_angles

    @property
    def fine_size(self) -> int:
        return len(self.fine_offsets()) ** self.n_angles


@dataclass(frozen=True, eq=False)
class ScanResult:
    """Extremal energies found by the traversal (J; angles in degrees)"""
    e_max: float
    e_min: float
    capacity: float
    argmax: Tuple[float, ...]
    argmin: Tuple[float, ...]
    n_evaluations: int
    relative_deviation: Optional[float]
    surface: np.ndarray = field(repr=False)

    def to_dict(self) -> Dict[str, object]:
        return {
            "e_max": self.e_max,
            "e_min": self.e_min,
            "capacity": self.capacity,
            "argmax": list(self.argmax),
            "argmin": list(self.argmin),
            "n_evaluations": self.n_evaluations,
            "relative_deviation": self.relative_deviation,
        }

    def surface_frame(self) -> pd.DataFrame:
        """Every evaluated point as (alpha, beta[, gamma], energy) rows"""
        names = ["alpha", "beta", "gamma"][: self.surface.shape[1] - 1]
        return pd.DataFrame(self.surface, columns=names + ["energy"])


def energy_surface(state: BlochState, cfg: EnsembleConfig, angles: np.ndarray) -> np.ndarray:
    """Internal energy after R_z(alpha), R_x(beta)[, R_y(gamma)] for every row of `angles` (deg)"""
    angles = np.atleast_2d(np.asarray(angles, dtype=float))
    sequence = "zxy"[: angles.shape[1]]
    # lowercase: extrinsic axes, first angle acts first
    rotations = _SciPyRotation.from_euler(sequence, angles, degrees=True)
    rotated = rotations.apply(state.vector)
    return 0.5 * cfg.energy_scale * np.atleast_2d(rotated)[:, 2]


def _grid(axes) -> np.ndarray:
    return np.array(list(itertools.product(*axes)), dtype=float)


def _extremum(points: np.ndarray, energies: np.ndarray, cfg: EnsembleConfig,
              maximize: bool) -> Tuple[float, np.ndarray]:
    """Extremal energy and its angles; ties go to the lexicographically smallest angles"""
    best = energies.max() if maximize else energies.min()
    tol = TIE_TOL * cfg.energy_scale
    tied = np.flatnonzero(np.abs(energies - best) <= tol)
    candidates = points[tied]
    order = np.lexsort(candidates.T[::-1])
    winner = tied[order[0]]
    return float(energies[winner]), points[winner]


def _window(center: np.ndarray, sc: ScanConfig) -> np.ndarray:
    offsets = sc.fine_offsets()
    return _grid([np.mod(c + offsets, FULL_TURN) for c in center])


def _window_center(coarse: np.ndarray, energies: np.ndarray, cfg: EnsembleConfig, sc: ScanConfig,
                   maximize: bool) -> np.ndarray:
    """Coarse extremum, with alpha taken from the best alpha-sensitive cell when the extremum is flat in alpha.

    The beta = 0 and beta = 180 deg rows are flat in alpha.
    """
    _, center = _extremum(coarse, energies, cfg, maximize)
    n = len(sc.coarse_axis())
    # itertools.product order: alpha is the leading axis
    surface = energies.reshape((n,) * sc.n_angles)
    spread = surface.max(axis=0) - surface.min(axis=0)
    sensitive = spread > TIE_TOL * cfg.energy_scale
    rest = tuple(int(i) for i in np.rint(center[1:] / sc.coarse_step))
    if sensitive[rest] or not sensitive.any():
        return center
    mask = np.broadcast_to(sensitive, surface.shape).ravel()
    _, anchor = _extremum(coarse[mask], energies[mask], cfg, maximize)
    logger.debug(
        f"Coarse {'maximum' if maximize else 'minimum'} at {tuple(center)} is flat in alpha; "
        f"window alpha taken from {tuple(anchor)}"
    )
    return np.concatenate([anchor[:1], center[1:]])


def hierarchical_scan(state: BlochState, cfg: EnsembleConfig, sc: ScanConfig) -> ScanResult:
    coarse = _grid([sc.coarse_axis()] * sc.n_angles)
    if len(coarse) == 0:
        raise ConfigurationError("scan grid is empty")
    coarse_energy = energy_surface(state, cfg, coarse)
    coarse_max = _window_center(coarse, coarse_energy, cfg, sc, maximize=True)
    coarse_min = _window_center(coarse, coarse_energy, cfg, sc, maximize=False)

    fine_max = _window(coarse_max, sc)
    fine_min = _window(coarse_min, sc)
    points = np.vstack([coarse, fine_max, fine_min])
    energies = np.concatenate([
        coarse_energy,
        energy_surface(state, cfg, fine_max),
        energy_surface(state, cfg, fine_min),
    ])

    e_max, argmax = _extremum(points, energies, cfg, maximize=True)
    e_min, argmin = _extremum(points, energies, cfg, maximize=False)
    capacity = e_max - e_min
    exact = capacity_exact(state, cfg)
    deviation = (exact - capacity) / exact if exact > 0 else None

    logger.info(
        f"Scan of {len(points)} points: capacity {capacity:.6e} J"
        + (f", relative deviation {deviation:.3e}" if deviation is not None else "")
    )
    return ScanResult(
        e_max=e_max,
        e_min=e_min,
        capacity=capacity,
        argmax=tuple(float(a) for a in argmax),
        argmin=tuple(float(a) for a in argmin),
        n_evaluations=len(points),
        relative_deviation=deviation,
        surface=np.column_stack([points, energies]),
    )
