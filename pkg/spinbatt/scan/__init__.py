"""Pulse sequences, hierarchical capacity scan and measurement protocols"""
from .protocols import (
    PROTOCOLS,
    ProtocolOutcome,
    ProtocolRunner,
    build_protocol,
    protocol_1,
    protocol_2,
    protocol_3,
)
from .pulses import (
    FreePrecess,
    GradientPulse,
    PulseOp,
    Pump,
    Readout,
    RotX,
    RotY,
    RotZ,
    ScanStage,
    SequenceEnvironment,
    preparation_ops,
    run_sequence,
)
from .traversal import ScanConfig, ScanResult, energy_surface, hierarchical_scan

__all__ = [
    'PulseOp', 'RotX', 'RotY', 'RotZ', 'FreePrecess', 'GradientPulse', 'Pump', 'Readout', 'ScanStage',
    'SequenceEnvironment', 'preparation_ops', 'run_sequence',
    'ScanConfig', 'ScanResult', 'energy_surface', 'hierarchical_scan',
    'protocol_1', 'protocol_2', 'protocol_3', 'build_protocol', 'PROTOCOLS',
    'ProtocolRunner', 'ProtocolOutcome',
]
