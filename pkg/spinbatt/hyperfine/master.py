"""
Master equation of the 87Rb ground manifold.

    drho/dt = (1/i hbar)[H_g, rho]
              + r_se  (phi (I + 4<S>.S) - rho)
              + r_wall(I/8 - rho)
              + r_sd  (phi - rho)
              + r_op  (phi (I + 2 s.S) - rho)

phi = rho/4 + sum_k S_k rho S_k is the nuclear part of rho. The cell is taken
as spatially uniform; diffusion enters only through r_wall.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from ..core.errors import ConfigurationError, DegenerateProjectionError, InvalidStateError
from ..core.units import HBAR
from ..spin_core.state import BlochState
from .operators import (
    HyperfineParams,
    SpinOperators,
    build_operators,
    ground_hamiltonian,
    zeeman_hamiltonian,
)

logger = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-10
MIN_SUBSPACE_WEIGHT = 1e-6

SPIN_EXCHANGE = "spin_exchange"
WALL = "wall"
SPIN_DESTRUCTION = "spin_destruction"
OPTICAL_PUMPING = "optical_pumping"


@dataclass(frozen=True)
class RateParams:
    """Relaxation and pumping rates (1/s) and the mean photon spin"""
    r_se: float = 0.0
    r_sd: float = 0.0
    r_wall: float = 0.0
    r_op: float = 0.0
    photon_spin: Tuple[float, float, float] = (0.0, 0.0, 1.0)

    def __post_init__(self):
        rates = (self.r_se, self.r_sd, self.r_wall, self.r_op)
        if any(not math.isfinite(r) or r < 0 for r in rates):
            raise ConfigurationError(f"rates must be finite and non-negative: {rates}")
        if len(self.photon_spin) != 3:
            raise ConfigurationError(f"photon spin must be a 3-vector, got {self.photon_spin!r}")
        object.__setattr__(self, "photon_spin", tuple(float(v) for v in self.photon_spin))
        if np.linalg.norm(self.photon_spin) > 1.0 + 1e-12:
            raise ConfigurationError(f"|s| must not exceed 1, got {self.photon_spin!r}")

    @property
    def max_rate(self) -> float:
        return max(self.r_se, self.r_sd, self.r_wall, self.r_op)


def _check_density(rho: np.ndarray, dimension: int) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (dimension, dimension):
        raise InvalidStateError(f"density must be {dimension}x{dimension}, got {rho.shape}")
    scale = max(1.0, float(np.max(np.abs(rho))))
    if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_TOL * scale:
        raise InvalidStateError("density matrix is not Hermitian")
    return rho


def expectation(rho: np.ndarray, op: np.ndarray) -> float:
    return float(np.trace(rho @ op).real)


def spin_expectation(rho: np.ndarray, ops: SpinOperators) -> np.ndarray:
    """<S> = Tr(rho S)"""
    return np.array([expectation(rho, s) for s in ops.s])


def nuclear_part(rho: np.ndarray, ops: SpinOperators) -> np.ndarray:
    """phi = rho/4 + sum_k S_k rho S_k, the electron-depolarized part of rho"""
    return 0.25 * rho + sum(s @ rho @ s for s in ops.s)


def relaxation_terms(rho: np.ndarray, ops: SpinOperators, r: RateParams,
                     phi: Optional[np.ndarray] = None) -> Dict[str, np.ndarray]:
    """Contribution of each relaxation channel to drho/dt (1/s)"""
    phi = nuclear_part(rho, ops) if phi is None else phi
    identity = ops.identity
    mean_s = spin_expectation(rho, ops)
    return {
        SPIN_EXCHANGE: r.r_se * (phi @ (identity + 4.0 * ops.s_dot(mean_s)) - rho),
        WALL: r.r_wall * (identity / ops.dimension - rho),
        SPIN_DESTRUCTION: r.r_sd * (phi - rho),
        OPTICAL_PUMPING: r.r_op * (phi @ (identity + 2.0 * ops.s_dot(r.photon_spin)) - rho),
    }


class MasterEquation:
    """
    Right-hand side of the master equation with operators, Hamiltonian and
    rates fixed at construction.

    With rotating_frame=True the secular approximation is used: the hyperfine
    commutator is dropped and both the Zeeman Hamiltonian and the dissipator
    are projected onto the F=1 + F=2 block-diagonal subspace, so hyperfine
    coherences never build up.
    """

    def __init__(self, p: HyperfineParams, r: RateParams, field: Sequence[float],
                 rotating_frame: bool = False):
        if len(field) != 3 or not all(math.isfinite(b) for b in field):
            raise ConfigurationError(f"magnetic field must be a finite 3-vector, got {field!r}")
        self.params = p
        self.rates = r
        self.field = tuple(float(b) for b in field)
        self.rotating_frame = rotating_frame
        self.ops = build_operators(p)
        self.block_mask = self.ops.f_block_mask()
        if rotating_frame:
            self.hamiltonian = np.where(self.block_mask, zeeman_hamiltonian(p, self.field, self.ops), 0.0)
        else:
            self.hamiltonian = ground_hamiltonian(p, self.field, self.ops)

    @property
    def larmor(self) -> float:
        """Electron Larmor angular frequency g_s mu_B |B| / hbar (rad/s)"""
        return self.params.g_s * self.params.mu_b * float(np.linalg.norm(self.field)) / HBAR

    @property
    def fastest_rate(self) -> float:
        """Largest rate or frequency the integrator must resolve (1/s)"""
        rates = [self.rates.max_rate, self.larmor]
        if not self.rotating_frame:
            rates.append(self.params.delta_hf)
        return max(rates)

    def project(self, rho: np.ndarray) -> np.ndarray:
        """Drop hyperfine coherences (identity outside the rotating frame)"""
        if not self.rotating_frame:
            return rho
        return np.where(self.block_mask, rho, 0.0)

    def commutator(self, rho: np.ndarray) -> np.ndarray:
        return (-1j / HBAR) * (self.hamiltonian @ rho - rho @ self.hamiltonian)

    def terms(self, rho: np.ndarray) -> Dict[str, np.ndarray]:
        rho = _check_density(rho, self.ops.dimension)
        return relaxation_terms(rho, self.ops, self.rates)

    def rhs(self, rho: np.ndarray) -> np.ndarray:
        rho = _check_density(rho, self.ops.dimension)
        drho = self.commutator(rho) + sum(relaxation_terms(rho, self.ops, self.rates).values())
        return self.project(drho)

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        return self.rhs(rho)

    def __repr__(self) -> str:
        return f"MasterEquation(rates={self.rates}, field={self.field}, rotating_frame={self.rotating_frame})"


def master_rhs(rho: np.ndarray, p: HyperfineParams, r: RateParams, field: Sequence[float],
               rotating_frame: bool = False) -> np.ndarray:
    """drho/dt for a single evaluation; build a MasterEquation to reuse operators"""
    return MasterEquation(p, r, field, rotating_frame=rotating_frame).rhs(rho)


def maximally_mixed(ops: SpinOperators) -> np.ndarray:
    return ops.identity / ops.dimension


def stretched_state(ops: SpinOperators) -> np.ndarray:
    """|F=2, m=2><F=2, m=2|"""
    rho = np.zeros((ops.dimension, ops.dimension), dtype=complex)
    idx = ops.index(2, 2)
    rho[idx, idx] = 1.0
    return rho


def electron_polarization(rho: np.ndarray, ops: SpinOperators) -> float:
    """P = 2 <S_z>"""
    return 2.0 * expectation(rho, ops.s[2])


def total_fz(rho: np.ndarray, ops: SpinOperators) -> float:
    return expectation(rho, ops.fz)


def project_battery_subspace(rho: np.ndarray, ops: Optional[SpinOperators] = None) -> Tuple[BlochState, float]:
    """
    Bloch state of the effective two-level battery formed by |2,2> (spin up)
    and |2,1> (spin down), together with the population of that subspace.
    """
    ops = ops or build_operators(HyperfineParams())
    rho = _check_density(rho, ops.dimension)
    up, down = ops.index(2, 2), ops.index(2, 1)
    weight = float((rho[up, up] + rho[down, down]).real)
    if weight < MIN_SUBSPACE_WEIGHT:
        raise DegenerateProjectionError(f"battery subspace weight {weight!r} is below {MIN_SUBSPACE_WEIGHT}")
    coherence = rho[up, down] / weight
    vector = np.array([
        2.0 * coherence.real,
        -2.0 * coherence.imag,
        float((rho[up, up] - rho[down, down]).real) / weight,
    ])
    length = float(np.linalg.norm(vector))
    if length > 1.0:
        # round-off from a slightly non-positive block
        vector = vector / length
    return BlochState.from_vector(vector), weight
