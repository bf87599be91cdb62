"""Closed-form charging, relaxation, dephasing and FID synthesis"""
from .charging import (
    PumpRelaxParams,
    capacity_vs_time,
    polarization,
    pump,
    spin_temperature,
    steady_state_capacity,
)
from .evolution import (
    DephasingChannel,
    FreeEvolutionParams,
    calibrated_dephasing,
    dephase,
    dephasing_trajectory,
    free_evolve,
)
from .fid import FidConfig, FidTrace, fid_signal

__all__ = [
    'PumpRelaxParams', 'capacity_vs_time', 'steady_state_capacity', 'spin_temperature', 'polarization', 'pump',
    'FreeEvolutionParams', 'DephasingChannel', 'free_evolve', 'dephase', 'dephasing_trajectory',
    'calibrated_dephasing', 'FidConfig', 'FidTrace', 'fid_signal',
]
