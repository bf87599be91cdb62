"""
Pulse-sequence vocabulary and execution on the battery state.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import List, Sequence, Tuple, Union

from ..core.errors import ConfigurationError
from ..dynamics.charging import PumpRelaxParams, pump
from ..dynamics.evolution import DephasingChannel, FreeEvolutionParams, dephase, free_evolve
from ..spin_core.state import BlochState, Rotation, parse_preparation, rotate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SequenceEnvironment:
    """Physical parameters consulted while a sequence runs"""
    free: FreeEvolutionParams
    dephasing: DephasingChannel
    pump: PumpRelaxParams


class PulseOp(ABC):
    """One stage of a pulse sequence"""

    @abstractmethod
    def apply(self, state: BlochState, env: SequenceEnvironment) -> BlochState:
        pass

    @property
    @abstractmethod
    def label(self) -> str:
        pass


@dataclass(frozen=True)
class _RotationOp(PulseOp):
    angle: float  # rad

    axis = "x"

    def __post_init__(self):
        if not math.isfinite(self.angle):
            raise ConfigurationError(f"rotation angle must be finite, got {self.angle!r}")

    def rotation(self) -> Rotation:
        return getattr(Rotation, self.axis)(self.angle)

    def apply(self, state: BlochState, env: SequenceEnvironment) -> BlochState:
        return rotate(state, self.rotation())

    @property
    def label(self) -> str:
        return f"R{self.axis}({math.degrees(self.angle):g})"

    @classmethod
    def degrees(cls, angle: float) -> "_RotationOp":
        return cls(math.radians(angle))


@dataclass(frozen=True)
class RotX(_RotationOp):
    axis = "x"


@dataclass(frozen=True)
class RotY(_RotationOp):
    axis = "y"


@dataclass(frozen=True)
class RotZ(_RotationOp):
    axis = "z"


@dataclass(frozen=True)
class _TimedOp(PulseOp):
    duration: float  # s

    def __post_init__(self):
        if not self.duration >= 0:
            raise ConfigurationError(f"{type(self).__name__} duration must be non-negative, got {self.duration!r}")


@dataclass(frozen=True)
class FreePrecess(_TimedOp):
    def apply(self, state: BlochState, env: SequenceEnvironment) -> BlochState:
        return free_evolve(state, self.duration, env.free)

    @property
    def label(self) -> str:
        return f"free({self.duration:g})"


@dataclass(frozen=True)
class GradientPulse(_TimedOp):
    """Gradient-field pulse; an infinite duration erases all coherence"""

    @classmethod
    def full(cls) -> "GradientPulse":
        return cls(math.inf)

    def apply(self, state: BlochState, env: SequenceEnvironment) -> BlochState:
        if math.isinf(self.duration):
            return BlochState(0.0, 0.0, state.sz)
        return dephase(state, self.duration, env.dephasing)

    @property
    def label(self) -> str:
        return "gradient(full)" if math.isinf(self.duration) else f"gradient({self.duration:g})"


@dataclass(frozen=True)
class Pump(_TimedOp):
    def apply(self, state: BlochState, env: SequenceEnvironment) -> BlochState:
        return pump(state, self.duration, env.pump)

    @property
    def label(self) -> str:
        return f"pump({self.duration:g})"


@dataclass(frozen=True)
class Readout(PulseOp):
    """Records the state without modifying it"""
    name: str = "final"

    def apply(self, state: BlochState, env: SequenceEnvironment) -> BlochState:
        return state

    @property
    def label(self) -> str:
        return f"readout({self.name})"


@dataclass(frozen=True)
class ScanStage(PulseOp):
    """Marks where the runner performs the hierarchical scan"""

    def apply(self, state: BlochState, env: SequenceEnvironment) -> BlochState:
        return state

    @property
    def label(self) -> str:
        return "scan"


_ROTATION_OPS = {"x": RotX, "y": RotY, "z": RotZ}
_AXIS_NAMES = {(1.0, 0.0, 0.0): "x", (0.0, 1.0, 0.0): "y", (0.0, 0.0, 1.0): "z"}


def preparation_ops(prep: Union[str, Sequence[Rotation]]) -> List[PulseOp]:
    """Rotation ops in application order from a string like "Rz(200)Rx(33)" or Rotation objects"""
    rotations = parse_preparation(prep) if isinstance(prep, str) else list(prep)
    ops: List[PulseOp] = []
    for r in rotations:
        axis = _AXIS_NAMES.get(tuple(r.axis))
        if axis is None:
            raise ConfigurationError(f"preparation rotations must be about x, y or z, got axis {r.axis}")
        ops.append(_ROTATION_OPS[axis](r.angle))
    return ops


def run_sequence(state: BlochState, seq: Sequence[PulseOp],
                 env: SequenceEnvironment) -> List[Tuple[PulseOp, BlochState]]:
    """Apply ops left to right, recording the state after each"""
    history = []
    for op in seq:
        state = op.apply(state, env)
        logger.debug(f"{op.label}: {state}")
        history.append((op, state))
    return history
