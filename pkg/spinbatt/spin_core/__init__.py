"""Battery states, rotations, energetics and entropy-capacity relations"""
from .energetics import (
    CapacityReport,
    active_state,
    antiergotropy,
    capacity_exact,
    capacity_report,
    coherent_capacity,
    coherent_part,
    ergotropy,
    incoherent_capacity,
    incoherent_part,
    internal_energy,
    passive_state,
    spectral_capacity,
)
from .entropy import linear_entropy, tsallis_entropy, von_neumann_entropy
from .relations import EntropyRelation, RelationChecker, RelationReport, relation_report
from .state import (
    BlochState,
    EnsembleConfig,
    Rotation,
    TwoLevelDensity,
    density_from_bloch,
    parse_preparation,
    prepare,
    rotate,
    state_from_spec,
)

__all__ = [
    'BlochState', 'EnsembleConfig', 'Rotation', 'TwoLevelDensity', 'density_from_bloch', 'rotate',
    'prepare', 'parse_preparation', 'state_from_spec',
    'CapacityReport', 'internal_energy', 'capacity_exact', 'ergotropy', 'antiergotropy',
    'coherent_capacity', 'incoherent_capacity', 'passive_state', 'active_state', 'coherent_part',
    'incoherent_part', 'spectral_capacity', 'capacity_report',
    'von_neumann_entropy', 'tsallis_entropy', 'linear_entropy',
    'EntropyRelation', 'RelationChecker', 'RelationReport', 'relation_report',
]
