"""
Battery energetics: internal energy, ergotropy, anti-ergotropy, capacity and its
coherent/incoherent decomposition.

All closed forms are evaluated in units of k = hbar*gamma*B0*N and scaled to J
on return. The per-atom Hamiltonian is (hbar*gamma*B0/2) sigma_z, so the
internal energy spans [-k/2, +k/2].
"""

import logging
import math
from dataclasses import asdict, dataclass
from typing import Dict

import numpy as np

from .state import PAULI_Z, BlochState, EnsembleConfig, TwoLevelDensity

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CapacityReport:
    """Energetic summary of a battery state (J)"""
    energy: float
    ergotropy: float
    antiergotropy: float
    capacity: float
    coherent_capacity: float
    incoherent_capacity: float

    def scaled(self, factor: float) -> Dict[str, float]:
        """Fields divided by `factor` (e.g. the electron volt)"""
        return {name: value / factor for name, value in asdict(self).items()}


def internal_energy(state: BlochState, cfg: EnsembleConfig) -> float:
    return cfg.energy_scale * 0.5 * state.sz


def capacity_exact(state: BlochState, cfg: EnsembleConfig) -> float:
    """k * S: max minus min internal energy over all global SU(2) rotations"""
    return cfg.energy_scale * state.length


def ergotropy(state: BlochState, cfg: EnsembleConfig) -> float:
    """Largest energy decrease reachable by a unitary: (k/2)(sz + S)"""
    return cfg.energy_scale * 0.5 * max(state.sz + state.length, 0.0)


def antiergotropy(state: BlochState, cfg: EnsembleConfig) -> float:
    """Largest energy increase reachable by a unitary: (k/2)(S - sz)"""
    return cfg.energy_scale * 0.5 * max(state.length - state.sz, 0.0)


def coherent_capacity(state: BlochState, cfg: EnsembleConfig) -> float:
    return cfg.energy_scale * state.coherence


def incoherent_capacity(state: BlochState, cfg: EnsembleConfig) -> float:
    return cfg.energy_scale * abs(state.sz)


def passive_state(state: BlochState) -> BlochState:
    """Lowest-energy state on the unitary orbit"""
    return BlochState(0.0, 0.0, -state.length)


def active_state(state: BlochState) -> BlochState:
    """Highest-energy state on the unitary orbit"""
    return BlochState(0.0, 0.0, state.length)


def coherent_part(state: BlochState) -> BlochState:
    """Transverse component: the state with its populations equalized"""
    return BlochState(state.sx, state.sy, 0.0)


def incoherent_part(state: BlochState) -> BlochState:
    """Longitudinal component: the fully dephased state"""
    return BlochState(0.0, 0.0, state.sz)


def spectral_capacity(density: TwoLevelDensity, cfg: EnsembleConfig) -> float:
    """
    Capacity from spectra: the unitary orbit maximum pairs the largest
    eigenvalue of rho with the largest energy, the minimum pairs it with the
    smallest.
    """
    rho_desc = np.sort(np.linalg.eigvalsh(density.matrix))[::-1]
    energies_desc = np.sort(np.linalg.eigvalsh(0.5 * PAULI_Z).real)[::-1]
    e_max = float(np.dot(rho_desc, energies_desc))
    e_min = float(np.dot(rho_desc, energies_desc[::-1]))
    return cfg.energy_scale * (e_max - e_min)


def capacity_report(state: BlochState, cfg: EnsembleConfig) -> CapacityReport:
    report = CapacityReport(
        energy=internal_energy(state, cfg),
        ergotropy=ergotropy(state, cfg),
        antiergotropy=antiergotropy(state, cfg),
        capacity=capacity_exact(state, cfg),
        coherent_capacity=coherent_capacity(state, cfg),
        incoherent_capacity=incoherent_capacity(state, cfg),
    )
    if report.capacity > 0 and not math.isclose(
        report.capacity ** 2,
        report.coherent_capacity ** 2 + report.incoherent_capacity ** 2,
        rel_tol=1e-10,
    ):
        logger.warning(f"Pythagorean decomposition residual for {state}")
    return report
