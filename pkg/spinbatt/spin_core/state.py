"""
Battery state representations.
The canonical battery state is the per-atom normalized collective spin (Bloch
vector). Densities, rotations and the ensemble energy scale live here.
"""

import logging
import math
import re
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np
from scipy.linalg import expm
from scipy.spatial.transform import Rotation as _SciPyRotation

from ..core.errors import ConfigurationError, InvalidStateError, UsageError
from ..core.units import HBAR, ev_to_joules

logger = logging.getLogger(__name__)

BLOCH_SLACK = 1e-12
MATRIX_TOL = 1e-12

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class EnsembleConfig:
    """Atom number, gyromagnetic ratio and bias field of the ensemble"""
    n_atoms: float
    gamma: float
    b0: float

    def __post_init__(self):
        checks = {
            "n_atoms >= 1": self.n_atoms >= 1,
            "gamma > 0": self.gamma > 0,
            "b0 > 0": self.b0 > 0,
        }
        failed = [name for name, ok in checks.items() if not ok]
        if failed or not all(math.isfinite(v) for v in (self.n_atoms, self.gamma, self.b0)):
            raise ConfigurationError(f"invalid ensemble {self}: failed {failed or 'finiteness'}")

    @property
    def energy_scale(self) -> float:
        """k = hbar * gamma * B0 * N in J"""
        return HBAR * self.gamma * self.b0 * self.n_atoms

    @classmethod
    def from_energy_scale(cls, energy_ev: float, n_atoms: float, gamma: float) -> "EnsembleConfig":
        """Solve for the bias field that gives the requested k (in eV)"""
        b0 = ev_to_joules(energy_ev) / (HBAR * gamma * n_atoms)
        return cls(n_atoms=n_atoms, gamma=gamma, b0=b0)


@dataclass(frozen=True)
class BlochState:
    """
    Per-atom normalized collective spin (sx, sy, sz).
    The Bloch length S equals lambda_plus - lambda_minus of the single-spin density.
    """
    sx: float
    sy: float
    sz: float

    def __post_init__(self):
        components = (self.sx, self.sy, self.sz)
        if not all(math.isfinite(c) for c in components):
            raise InvalidStateError(f"non-finite Bloch components {components}")
        if self.length > 1.0 + BLOCH_SLACK:
            raise InvalidStateError(f"Bloch length {self.length!r} exceeds 1")

    @property
    def length(self) -> float:
        return math.sqrt(self.sx * self.sx + self.sy * self.sy + self.sz * self.sz)

    @property
    def coherence(self) -> float:
        """Transverse magnitude c = sqrt(sx^2 + sy^2)"""
        return math.hypot(self.sx, self.sy)

    @property
    def phase(self) -> float:
        """Transverse phase atan2(sy, sx)"""
        return math.atan2(self.sy, self.sx)

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.sx, self.sy, self.sz], dtype=float)

    @classmethod
    def from_vector(cls, vector: Sequence[float]) -> "BlochState":
        if len(vector) != 3:
            raise InvalidStateError(f"Bloch vector needs 3 components, got {len(vector)}")
        return cls(float(vector[0]), float(vector[1]), float(vector[2]))

    @classmethod
    def from_polar(cls, length: float, theta: float, phi: float = 0.0) -> "BlochState":
        """State of Bloch length `length` at polar angle theta and azimuth phi (rad)"""
        return cls(
            length * math.sin(theta) * math.cos(phi),
            length * math.sin(theta) * math.sin(phi),
            length * math.cos(theta),
        )

    @classmethod
    def from_density(cls, density: "TwoLevelDensity") -> "BlochState":
        return density.bloch()

    @classmethod
    def unpolarized(cls) -> "BlochState":
        return cls(0.0, 0.0, 0.0)


@dataclass(frozen=True, eq=False)
class TwoLevelDensity:
    """2x2 Hermitian, trace-one single-spin density matrix"""
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise InvalidStateError(f"two-level density must be 2x2, got {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > MATRIX_TOL:
            raise InvalidStateError("two-level density is not Hermitian")
        if abs(np.trace(m) - 1.0) > MATRIX_TOL:
            raise InvalidStateError(f"two-level density has trace {np.trace(m).real!r}")
        object.__setattr__(self, "matrix", m)
        lam_minus, lam_plus = self.eigenvalues
        if lam_minus < -BLOCH_SLACK or lam_plus > 1.0 + BLOCH_SLACK:
            raise InvalidStateError(f"eigenvalues ({lam_plus}, {lam_minus}) outside [0, 1]")

    @property
    def eigenvalues(self) -> Tuple[float, float]:
        """(lambda_minus, lambda_plus), ascending"""
        values = np.linalg.eigvalsh(self.matrix)
        return float(values[0]), float(values[1])

    def bloch(self) -> BlochState:
        m = self.matrix
        return BlochState(
            2.0 * float(m[0, 1].real),
            -2.0 * float(m[0, 1].imag),
            float((m[0, 0] - m[1, 1]).real),
        )


@dataclass(frozen=True)
class Rotation:
    """Right-handed rotation of the Bloch vector by `angle` (rad) about a unit axis"""
    axis: Tuple[float, float, float]
    angle: float

    def __post_init__(self):
        norm = math.sqrt(sum(a * a for a in self.axis))
        if len(self.axis) != 3 or abs(norm - 1.0) > MATRIX_TOL:
            raise InvalidStateError(f"rotation axis {self.axis} is not a unit 3-vector")
        if not math.isfinite(self.angle):
            raise InvalidStateError(f"rotation angle {self.angle!r} is not finite")

    @classmethod
    def about(cls, axis: Sequence[float], angle: float) -> "Rotation":
        vec = np.asarray(axis, dtype=float)
        norm = np.linalg.norm(vec)
        if norm == 0:
            raise InvalidStateError("rotation axis has zero length")
        unit = vec / norm
        return cls((float(unit[0]), float(unit[1]), float(unit[2])), float(angle))

    @classmethod
    def x(cls, angle: float) -> "Rotation":
        return cls((1.0, 0.0, 0.0), float(angle))

    @classmethod
    def y(cls, angle: float) -> "Rotation":
        return cls((0.0, 1.0, 0.0), float(angle))

    @classmethod
    def z(cls, angle: float) -> "Rotation":
        return cls((0.0, 0.0, 1.0), float(angle))

    def as_scipy(self) -> _SciPyRotation:
        return _SciPyRotation.from_rotvec(np.asarray(self.axis) * self.angle)

    def matrix(self) -> np.ndarray:
        """3x3 SO(3) matrix acting on Bloch vectors"""
        return self.as_scipy().as_matrix()

    def unitary(self) -> np.ndarray:
        """SU(2) matrix exp(-i angle n.sigma / 2) inducing this rotation"""
        n_sigma = self.axis[0] * PAULI_X + self.axis[1] * PAULI_Y + self.axis[2] * PAULI_Z
        return expm(-0.5j * self.angle * n_sigma)


def density_from_bloch(state: BlochState) -> TwoLevelDensity:
    """(I + sx X + sy Y + sz Z) / 2"""
    matrix = 0.5 * (IDENTITY_2 + state.sx * PAULI_X + state.sy * PAULI_Y + state.sz * PAULI_Z)
    return TwoLevelDensity(matrix)


def rotate(state: BlochState, r: Rotation) -> BlochState:
    """Rotate the Bloch vector; the Bloch length is preserved"""
    rotated = r.as_scipy().apply(state.vector)
    # guard the length against round-off so S never crosses 1 + slack
    length = state.length
    new_length = float(np.linalg.norm(rotated))
    if new_length > 0:
        rotated = rotated * (length / new_length)
    return BlochState.from_vector(rotated)


def prepare(state: BlochState, rotations: Iterable[Rotation]) -> BlochState:
    """Apply rotations in sequence (first element acts first)"""
    for r in rotations:
        state = rotate(state, r)
    return state


_PREP_TOKEN = re.compile(r"\s*R([xyz])\(\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*\)\s*")


def parse_preparation(spec: str) -> List[Rotation]:
    """
    Parse a preparation string such as "Rz(200)Rx(33)" (angles in degrees).
    Operator notation: the rightmost rotation acts first, so the returned list
    is in application order.
    """
    spec = spec.strip()
    if not spec:
        return []
    rotations: List[Rotation] = []
    pos = 0
    while pos < len(spec):
        match = _PREP_TOKEN.match(spec, pos)
        if match is None:
            raise UsageError(f"malformed preparation {spec!r} at position {pos}")
        axis, degrees = match.group(1), float(match.group(2))
        rotations.append(getattr(Rotation, axis)(math.radians(degrees)))
        pos = match.end()
    return list(reversed(rotations))


def state_from_spec(spec: str, initial: BlochState = BlochState(0.0, 0.0, 1.0)) -> BlochState:
    """
    Build a state from either explicit Bloch components "sx,sy,sz" or a
    preparation string applied to `initial`.
    """
    text = spec.strip()
    if text.startswith("R") or not text:
        return prepare(initial, parse_preparation(text))
    try:
        components = [float(part) for part in text.split(",")]
    except ValueError as e:
        raise UsageError(f"malformed state spec {spec!r}") from e
    if len(components) != 3:
        raise UsageError(f"state spec {spec!r} needs three components")
    try:
        return BlochState.from_vector(components)
    except InvalidStateError as e:
        raise UsageError(str(e)) from e
