"""Shared configuration, errors, units and the experiment framework"""
from .base import BaseExperiment
from .config import RunConfig, load_config, render_default_config
from .errors import (
    ConfigurationError,
    DegenerateProjectionError,
    DomainError,
    FitFailureError,
    InconsistentReconstructionError,
    IntegrationError,
    InvalidStateError,
    NoSignalError,
    NumericalError,
    RelationViolationError,
    SpinBatteryError,
    UsageError,
)
from .registry import ExperimentRegistry

__all__ = [
    'BaseExperiment', 'RunConfig', 'load_config', 'render_default_config', 'ExperimentRegistry',
    'SpinBatteryError', 'ConfigurationError', 'UsageError', 'InvalidStateError', 'DomainError',
    'NumericalError', 'IntegrationError', 'FitFailureError', 'NoSignalError',
    'DegenerateProjectionError', 'InconsistentReconstructionError', 'RelationViolationError',
]
