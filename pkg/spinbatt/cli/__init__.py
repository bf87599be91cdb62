"""Batch experiment runner: click commands, experiments and result records"""
from .experiments import (
    CapacityExperiment,
    DephaseExperiment,
    EvolveExperiment,
    FidExperiment,
    ProtocolExperiment,
    ScanExperiment,
)
from .main import cli, main
from .records import ResultRecord, to_jsonable, write_record, write_series

__all__ = [
    'cli', 'main', 'ResultRecord', 'to_jsonable', 'write_record', 'write_series',
    'CapacityExperiment', 'ScanExperiment', 'ProtocolExperiment', 'EvolveExperiment',
    'DephaseExperiment', 'FidExperiment',
]
