"""
Angular-momentum operators and the ground-state Hamiltonian of 87Rb.

Operators are built in the product basis |m_S> x |m_I> and transformed to the
coupled basis |F, m_F> with Clebsch-Gordan coefficients <S m_S; I m_I | F m_F>.
Coupled-basis ordering: F=1 (m = -1, 0, 1) followed by F=2 (m = -2 .. 2).
"""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np
from sympy import Rational
from sympy.physics.quantum.cg import CG

from ..core.errors import ConfigurationError
from ..core.units import (
    BOHR_MAGNETON,
    ELECTRON_G_FACTOR,
    HBAR,
    RB87_HYPERFINE_SPLITTING,
    RB87_NUCLEAR_MOMENT,
    RB87_NUCLEAR_SPIN,
)

logger = logging.getLogger(__name__)

ELECTRON_SPIN = 0.5


@dataclass(frozen=True)
class HyperfineParams:
    """Ground-state constants; defaults are standard 87Rb values"""
    delta_hf: float = RB87_HYPERFINE_SPLITTING
    g_s: float = ELECTRON_G_FACTOR
    mu_b: float = BOHR_MAGNETON
    mu_i: float = RB87_NUCLEAR_MOMENT
    nuclear_spin: float = RB87_NUCLEAR_SPIN

    def __post_init__(self):
        if not self.delta_hf > 0:
            raise ConfigurationError(f"hyperfine splitting must be positive, got {self.delta_hf!r}")
        if not all(math.isfinite(v) for v in (self.delta_hf, self.g_s, self.mu_b, self.mu_i)):
            raise ConfigurationError(f"hyperfine constants must be finite: {self}")
        if self.nuclear_spin != RB87_NUCLEAR_SPIN:
            raise ConfigurationError(f"only I = 3/2 is supported, got {self.nuclear_spin}")

    @property
    def a_g(self) -> float:
        """Hyperfine coupling A_g = 2 hbar delta_hf / (2I + 1) (J)"""
        return 2.0 * HBAR * self.delta_hf / (2.0 * self.nuclear_spin + 1.0)

    @property
    def dimension(self) -> int:
        return int(round((2 * self.nuclear_spin + 1) * (2 * ELECTRON_SPIN + 1)))


@dataclass(frozen=True, eq=False)
class SpinOperators:
    """Electron (S) and nuclear (I) spin matrices in the coupled basis"""
    s: Tuple[np.ndarray, np.ndarray, np.ndarray]
    i: Tuple[np.ndarray, np.ndarray, np.ndarray]
    basis: Tuple[Tuple[int, int], ...]
    identity: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self.identity is None:
            object.__setattr__(self, "identity", np.eye(len(self.basis), dtype=complex))

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def index(self, f: int, m: int) -> int:
        """Position of |F, m_F> in the coupled basis"""
        return self.basis.index((f, m))

    def s_dot(self, vector: Sequence[float]) -> np.ndarray:
        return sum(float(v) * op for v, op in zip(vector, self.s))

    def i_dot(self, vector: Sequence[float]) -> np.ndarray:
        return sum(float(v) * op for v, op in zip(vector, self.i))

    def i_dot_s(self) -> np.ndarray:
        return sum(ik @ sk for ik, sk in zip(self.i, self.s))

    @property
    def fz(self) -> np.ndarray:
        return self.s[2] + self.i[2]

    def f_block_mask(self) -> np.ndarray:
        """True where row and column belong to the same hyperfine multiplet"""
        f_labels = np.array([f for f, _ in self.basis])
        return f_labels[:, None] == f_labels[None, :]


def spin_matrices(j: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(J_x, J_y, J_z) for spin j in the basis m = j, j-1, ..., -j"""
    n = int(round(2 * j + 1))
    m = j - np.arange(n)
    j_plus = np.zeros((n, n), dtype=complex)
    for k in range(1, n):
        j_plus[k - 1, k] = math.sqrt(j * (j + 1) - m[k] * (m[k] + 1))
    j_minus = j_plus.conj().T
    jx = 0.5 * (j_plus + j_minus)
    jy = -0.5j * (j_plus - j_minus)
    jz = np.diag(m).astype(complex)
    return jx, jy, jz


def _coupled_basis(nuclear_spin: float) -> List[Tuple[float, float]]:
    f_values = [nuclear_spin - ELECTRON_SPIN, nuclear_spin + ELECTRON_SPIN]
    basis = []
    for f in f_values:
        for m in np.arange(-f, f + 1):
            basis.append((f, float(m)))
    return basis


def _clebsch_gordan_matrix(nuclear_spin: float) -> np.ndarray:
    """U[c, p] = <S m_S; I m_I | F m_F> with product index p = i_S * (2I+1) + i_I"""
    s_half = Rational(1, 2)
    i_rat = Rational(int(round(2 * nuclear_spin)), 2)
    n_s, n_i = 2, int(round(2 * nuclear_spin + 1))
    m_s_values = [s_half - k for k in range(n_s)]
    m_i_values = [i_rat - k for k in range(n_i)]
    coupled = _coupled_basis(nuclear_spin)
    u = np.zeros((len(coupled), n_s * n_i))
    for c, (f, m_f) in enumerate(coupled):
        f_rat = Rational(int(round(2 * f)), 2)
        mf_rat = Rational(int(round(2 * m_f)), 2)
        for a, m_s in enumerate(m_s_values):
            for b, m_i in enumerate(m_i_values):
                if m_s + m_i != mf_rat:
                    continue
                u[c, a * n_i + b] = float(CG(s_half, m_s, i_rat, m_i, f_rat, mf_rat).doit())
    return u


@lru_cache(maxsize=4)
def _operators_for(nuclear_spin: float) -> SpinOperators:
    s_ops = spin_matrices(ELECTRON_SPIN)
    i_ops = spin_matrices(nuclear_spin)
    n_i = i_ops[0].shape[0]
    u = _clebsch_gordan_matrix(nuclear_spin)

    def to_coupled(op: np.ndarray) -> np.ndarray:
        coupled = u @ op @ u.T
        coupled.setflags(write=False)
        return coupled

    s = tuple(to_coupled(np.kron(op, np.eye(n_i))) for op in s_ops)
    i = tuple(to_coupled(np.kron(np.eye(2), op)) for op in i_ops)
    basis = tuple((int(round(f)), int(round(m))) for f, m in _coupled_basis(nuclear_spin))
    logger.info(f"Built spin operators for I={nuclear_spin} ({len(basis)} states)")
    return SpinOperators(s=s, i=i, basis=basis)


def build_operators(p: HyperfineParams) -> SpinOperators:
    """Coupled-basis spin operators; built once per nuclear spin and shared read-only"""
    return _operators_for(p.nuclear_spin)


def zeeman_hamiltonian(p: HyperfineParams, b: Sequence[float], ops: SpinOperators) -> np.ndarray:
    """g_s mu_B S.B - (mu_I / I) I.B (J)"""
    return p.g_s * p.mu_b * ops.s_dot(b) - (p.mu_i / p.nuclear_spin) * ops.i_dot(b)


def ground_hamiltonian(p: HyperfineParams, b: Sequence[float], ops: SpinOperators = None) -> np.ndarray:
    """H_g = A_g I.S + g_s mu_B S.B - (mu_I / I) I.B (J)"""
    ops = ops or build_operators(p)
    if len(b) != 3:
        raise ConfigurationError(f"magnetic field must be a 3-vector, got {b!r}")
    return p.a_g * ops.i_dot_s() + zeeman_hamiltonian(p, b, ops)
