"""87Rb ground-manifold operators, master equation and integrator"""
from .integrator import Trajectory, evolve, initial_density, steady_state, summarize
from .master import (
    MasterEquation,
    RateParams,
    electron_polarization,
    master_rhs,
    maximally_mixed,
    nuclear_part,
    project_battery_subspace,
    relaxation_terms,
    stretched_state,
    total_fz,
)
from .operators import HyperfineParams, SpinOperators, build_operators, ground_hamiltonian, spin_matrices

__all__ = [
    'HyperfineParams', 'SpinOperators', 'build_operators', 'ground_hamiltonian', 'spin_matrices',
    'RateParams', 'MasterEquation', 'master_rhs', 'nuclear_part', 'relaxation_terms',
    'project_battery_subspace', 'electron_polarization', 'total_fz', 'maximally_mixed', 'stretched_state',
    'Trajectory', 'evolve', 'steady_state', 'initial_density', 'summarize',
]
