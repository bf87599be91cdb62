"""
Time integration of the ground-manifold master equation.
Fixed-step RK4 with Hermitian re-symmetrization after every step; the step is
guarded against the fastest rate of the equation.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import least_squares

from ..core.errors import (
    ConfigurationError,
    DegenerateProjectionError,
    IntegrationError,
    InvalidStateError,
)
from ..core.units import joules_to_ev
from ..spin_core.energetics import capacity_exact
from ..spin_core.state import BlochState, EnsembleConfig
from .master import (
    MasterEquation,
    expectation,
    maximally_mixed,
    project_battery_subspace,
    stretched_state,
)
from .operators import SpinOperators

logger = logging.getLogger(__name__)

STEP_SAFETY = 0.1
TRACE_TOL = 1e-6
POSITIVITY_TOL = 1e-8
INITIAL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled densities; states has shape (n_samples, 8, 8)"""
    times: np.ndarray
    states: np.ndarray
    ops: SpinOperators

    def __len__(self) -> int:
        return len(self.times)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def populations(self) -> np.ndarray:
        """Diagonal of every sample in the |F, m_F> basis"""
        return np.real(np.diagonal(self.states, axis1=1, axis2=2))

    def expectation(self, op: np.ndarray) -> np.ndarray:
        return np.real(np.einsum("nij,ji->n", self.states, op))

    def battery_states(self) -> List[Tuple[Optional[BlochState], float]]:
        """Projected battery state per sample; None where the subspace is empty"""
        projected = []
        for rho in self.states:
            try:
                projected.append(project_battery_subspace(rho, self.ops))
            except DegenerateProjectionError:
                weight = float(np.real(rho[self.ops.index(2, 2), self.ops.index(2, 2)]
                                       + rho[self.ops.index(2, 1), self.ops.index(2, 1)]))
                projected.append((None, weight))
        return projected

    def to_frame(self, cfg: EnsembleConfig) -> pd.DataFrame:
        """Columnar export: time, p1..p8, sz_mean, battery Bloch vector, weight, capacity (eV)"""
        frame = pd.DataFrame({"time": self.times})
        populations = self.populations()
        for j in range(populations.shape[1]):
            frame[f"p{j + 1}"] = populations[:, j]
        frame["sz_mean"] = self.expectation(self.ops.s[2])
        rows = []
        for state, weight in self.battery_states():
            if state is None:
                rows.append((math.nan, math.nan, math.nan, weight, math.nan))
            else:
                capacity = joules_to_ev(capacity_exact(state, cfg))
                rows.append((state.sx, state.sy, state.sz, weight, capacity))
        battery = pd.DataFrame(rows, columns=["bloch_x", "bloch_y", "bloch_z", "subspace_weight", "capacity_ev"])
        return pd.concat([frame, battery], axis=1)


def _check_initial(rho0: np.ndarray, dimension: int) -> np.ndarray:
    rho = np.asarray(rho0, dtype=complex)
    if rho.shape != (dimension, dimension):
        raise InvalidStateError(f"initial density must be {dimension}x{dimension}, got {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > INITIAL_TOL:
        raise InvalidStateError("initial density is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > INITIAL_TOL:
        raise InvalidStateError(f"initial density has trace {np.trace(rho).real!r}")
    if np.linalg.eigvalsh(rho)[0] < -POSITIVITY_TOL:
        raise InvalidStateError("initial density is not positive semidefinite")
    return rho


def check_step(dt: float, equation: MasterEquation) -> None:
    """Step-size guard: dt <= 0.1 / fastest rate"""
    if not dt > 0:
        raise ConfigurationError(f"integration step must be positive, got {dt!r}")
    fastest = equation.fastest_rate
    if fastest > 0 and dt > STEP_SAFETY / fastest:
        raise ConfigurationError(
            f"step {dt:.3e} s exceeds guard {STEP_SAFETY / fastest:.3e} s (fastest rate {fastest:.3e} 1/s)"
        )


def rk4_step(rho: np.ndarray, h: float, equation: MasterEquation) -> np.ndarray:
    k1 = equation.rhs(rho)
    k2 = equation.rhs(rho + 0.5 * h * k1)
    k3 = equation.rhs(rho + 0.5 * h * k2)
    k4 = equation.rhs(rho + h * k3)
    rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return 0.5 * (rho + rho.conj().T)


def evolve(rho0: np.ndarray, t_final: float, dt: float, equation: MasterEquation,
           stride: int = 1) -> Trajectory:
    """
    Integrate from rho0 over [0, t_final].
    The step is shrunk so that an integer number of steps lands on t_final;
    every stride-th state (and the final one) is kept.
    """
    if not (t_final >= 0 and math.isfinite(t_final)):
        raise ConfigurationError(f"t_final must be finite and non-negative, got {t_final!r}")
    if stride < 1:
        raise ConfigurationError(f"stride must be >= 1, got {stride!r}")
    check_step(dt, equation)
    rho = equation.project(_check_initial(rho0, equation.ops.dimension))

    n_steps = int(math.ceil(t_final / dt - 1e-9)) if t_final > 0 else 0
    h = t_final / n_steps if n_steps else 0.0
    logger.info(f"Evolving {n_steps} RK4 steps of {h:.3e} s ({equation})")

    times = [0.0]
    states = [rho.copy()]
    for step in range(1, n_steps + 1):
        rho = rk4_step(rho, h, equation)
        trace = np.trace(rho).real
        if not np.all(np.isfinite(rho)) or abs(trace - 1.0) > TRACE_TOL:
            logger.error(f"Trace drift at step {step}: Tr(rho) = {trace!r}")
            raise IntegrationError(f"trace drifted to {trace!r} at t = {step * h:.6e} s")
        if step % stride == 0 or step == n_steps:
            min_eig = float(np.linalg.eigvalsh(rho)[0])
            if min_eig < -POSITIVITY_TOL:
                logger.error(f"Positivity lost at step {step}: min eigenvalue {min_eig!r}")
                raise IntegrationError(f"density lost positivity (min eigenvalue {min_eig!r}) at t = {step * h:.6e} s")
            times.append(step * h)
            states.append(rho.copy())

    return Trajectory(times=np.array(times), states=np.array(states), ops=equation.ops)


def _free_entries(equation: MasterEquation) -> Tuple[np.ndarray, np.ndarray]:
    """Upper-triangle (row, col) indices of the entries the state may carry"""
    n = equation.ops.dimension
    rows, cols = np.triu_indices(n)
    if equation.rotating_frame:
        keep = equation.block_mask[rows, cols]
        rows, cols = rows[keep], cols[keep]
    return rows, cols


def _unpack(x: np.ndarray, rows: np.ndarray, cols: np.ndarray, n: int) -> np.ndarray:
    m = len(rows)
    values = x[:m] + 1j * x[m:]
    rho = np.zeros((n, n), dtype=complex)
    rho[rows, cols] = values
    rho = rho + np.triu(rho, 1).conj().T
    diag = np.arange(n)
    rho[diag, diag] = rho[diag, diag].real
    return rho


def _pack(rho: np.ndarray, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    values = rho[rows, cols]
    return np.concatenate([values.real, values.imag])


def steady_state(equation: MasterEquation, guess: Optional[np.ndarray] = None,
                 tol: float = 1e-8) -> np.ndarray:
    """
    Fixed point of the master equation (drho/dt = 0, Tr rho = 1), solved by
    nonlinear least squares over Hermitian matrices.
    """
    ops = equation.ops
    n = ops.dimension
    rows, cols = _free_entries(equation)
    scale = max(equation.rates.max_rate, 1.0)
    start = equation.project(_check_initial(ops.identity / n if guess is None else guess, n))

    def residual(x: np.ndarray) -> np.ndarray:
        rho = _unpack(x, rows, cols, n)
        drho = equation.rhs(rho) / scale
        return np.concatenate([_pack(drho, rows, cols), [np.trace(rho).real - 1.0]])

    result = least_squares(residual, _pack(start, rows, cols), xtol=1e-15, ftol=1e-15, gtol=1e-15)
    rho = _unpack(result.x, rows, cols, n)
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho).real
    remaining = float(np.max(np.abs(residual(_pack(rho, rows, cols)))))
    if remaining > tol:
        logger.error(f"Steady-state solve stopped with residual {remaining:.3e}: {result.message}")
        raise IntegrationError(f"steady-state solve did not converge (residual {remaining:.3e})")
    min_eig = float(np.linalg.eigvalsh(rho)[0])
    if min_eig < -POSITIVITY_TOL:
        raise IntegrationError(f"steady state is not positive (min eigenvalue {min_eig!r})")
    logger.info(f"Steady state found in {result.nfev} evaluations")
    return rho


def initial_density(kind: str, ops: SpinOperators) -> np.ndarray:
    """'mixed' (I/8) or 'stretched' (|2,2>)"""
    builders = {"mixed": maximally_mixed, "stretched": stretched_state}
    if kind not in builders:
        raise ConfigurationError(f"unknown initial density {kind!r}; expected one of {sorted(builders)}")
    return builders[kind](ops)


def summarize(trajectory: Trajectory, cfg: EnsembleConfig) -> dict:
    """Final-state diagnostics for reporting"""
    rho = trajectory.final
    ops = trajectory.ops
    state, weight = trajectory.battery_states()[-1]
    return {
        "t_final": float(trajectory.times[-1]),
        "n_samples": len(trajectory),
        "final_populations": [float(p) for p in trajectory.populations()[-1]],
        "sz_mean": expectation(rho, ops.s[2]),
        "fz_mean": expectation(rho, ops.fz),
        "battery_bloch": None if state is None else [state.sx, state.sy, state.sz],
        "subspace_weight": weight,
        "battery_capacity": None if state is None else capacity_exact(state, cfg),
    }
