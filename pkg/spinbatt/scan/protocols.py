"""
Capacity-measurement protocols.

  Protocol 1: pump, prepare, scan, read out (coherent battery, operational capacity)
  Protocol 2: pump, prepare, coherence readout, full dephasing, R_x(90), population readout
              (tomographic capacity)
  Protocol 3: pump, prepare, full dephasing, scan, read out (incoherent battery)
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from ..core.errors import ConfigurationError
from ..dynamics.fid import FidConfig
from ..spin_core.state import BlochState, EnsembleConfig, Rotation
from ..tomography.readout import NoiseModel
from ..tomography.reconstruction import (
    TomographyResult,
    measure_coherence,
    population_readout,
    reconstruct_state,
)
from .pulses import (
    GradientPulse,
    PulseOp,
    Pump,
    Readout,
    RotX,
    ScanStage,
    SequenceEnvironment,
    preparation_ops,
)
from .traversal import ScanConfig, ScanResult, hierarchical_scan

logger = logging.getLogger(__name__)

COHERENT = "coherent"
INCOHERENT = "incoherent"
FINAL = "final"

Preparation = Union[str, Sequence[Rotation]]


def protocol_1(prep: Preparation, pump_duration: float = 1.0) -> List[PulseOp]:
    return [Pump(pump_duration), *preparation_ops(prep), ScanStage(), Readout(FINAL)]


def protocol_2(prep: Preparation, pump_duration: float = 1.0) -> List[PulseOp]:
    return [
        Pump(pump_duration),
        *preparation_ops(prep),
        Readout(COHERENT),
        GradientPulse.full(),
        RotX(0.5 * math.pi),
        Readout(INCOHERENT),
    ]


def protocol_3(prep: Preparation, pump_duration: float = 1.0) -> List[PulseOp]:
    return [Pump(pump_duration), *preparation_ops(prep), GradientPulse.full(), ScanStage(), Readout(FINAL)]


PROTOCOLS = {1: protocol_1, 2: protocol_2, 3: protocol_3}


def build_protocol(protocol_id: int, prep: Preparation, pump_duration: float = 1.0) -> List[PulseOp]:
    if protocol_id not in PROTOCOLS:
        raise ConfigurationError(f"unknown protocol {protocol_id!r}; expected one of {sorted(PROTOCOLS)}")
    return PROTOCOLS[protocol_id](prep, pump_duration)


@dataclass
class ProtocolOutcome:
    """Per-stage states plus the scan and tomography results, when the protocol has them"""
    stages: List[Tuple[str, BlochState]] = field(default_factory=list)
    readouts: Dict[str, BlochState] = field(default_factory=dict)
    scan: Optional[ScanResult] = None
    scanned_state: Optional[BlochState] = None
    tomography: Optional[TomographyResult] = None

    def to_dict(self) -> Dict[str, object]:
        return {
            "stages": [
                {"op": label, "bloch": [s.sx, s.sy, s.sz]} for label, s in self.stages
            ],
            "scan": None if self.scan is None else self.scan.to_dict(),
            "tomography": None if self.tomography is None else self.tomography.to_dict(),
        }


class ProtocolRunner:
    """Executes pulse sequences, running the scan and tomography stages they contain"""

    def __init__(self, env: SequenceEnvironment, cfg: EnsembleConfig, scan_config: ScanConfig,
                 fid_config: FidConfig, noise: NoiseModel):
        self.env = env
        self.cfg = cfg
        self.scan_config = scan_config
        self.fid_config = fid_config
        self.noise = noise

    def run(self, ops: Sequence[PulseOp], initial: BlochState = BlochState(0.0, 0.0, 0.0)) -> ProtocolOutcome:
        outcome = ProtocolOutcome()
        state = initial
        for op in ops:
            state = op.apply(state, self.env)
            outcome.stages.append((op.label, state))
            if isinstance(op, ScanStage):
                outcome.scan = hierarchical_scan(state, self.cfg, self.scan_config)
                outcome.scanned_state = state
            elif isinstance(op, Readout):
                outcome.readouts[op.name] = state

        if COHERENT in outcome.readouts and INCOHERENT in outcome.readouts:
            outcome.tomography = self._tomography(outcome.readouts[COHERENT], outcome.readouts[INCOHERENT])
        logger.info(f"Protocol finished after {len(ops)} stages")
        return outcome

    def _tomography(self, coherent: BlochState, rotated: BlochState) -> TomographyResult:
        free = self.env.free
        coherence = measure_coherence(coherent, free, self.fid_config, self.noise)
        population = population_readout(rotated, free, self.fid_config, self.noise.offset(1))
        return reconstruct_state(coherence, population, self.fid_config, self.cfg)
