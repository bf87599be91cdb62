"""Simulated readout, FID fitting and two-level state reconstruction"""
from .fitting import FidFitResult, fit_fid, fid_model, spectral_peak
from .readout import NoiseModel, simulate_readout
from .reconstruction import (
    PopulationEstimate,
    TomographyResult,
    measure_coherence,
    measure_population,
    population_readout,
    reconstruct_state,
    tomograph,
)

__all__ = [
    'NoiseModel', 'simulate_readout', 'FidFitResult', 'fit_fid', 'fid_model', 'spectral_peak',
    'PopulationEstimate', 'TomographyResult', 'measure_population', 'measure_coherence',
    'population_readout', 'reconstruct_state', 'tomograph',
]
