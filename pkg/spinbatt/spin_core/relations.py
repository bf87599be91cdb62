"""
Entropy-capacity relations.
Three constraints tie the capacity to the mixedness of the state:
  von Neumann:  C + S_v k >= k
  Tsallis:      C + T_p k <= k     (p >= 2)
  linear:       C^2 + 2 L^2 k^2 = k^2
Every state checked by the RelationChecker is verified against all three.
"""

import logging
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence

from ..core.errors import RelationViolationError
from .energetics import capacity_exact
from .entropy import linear_entropy, tsallis_entropy, von_neumann_entropy
from .state import BlochState, EnsembleConfig

logger = logging.getLogger(__name__)

DEFAULT_P_VALUES = (2.0, 3.0, 5.0, 10.0)
RELATIVE_TOL = 1e-12


class EntropyRelation(Enum):
    """The entropy-capacity constraints"""
    VON_NEUMANN = "von_neumann"
    TSALLIS = "tsallis"
    LINEAR = "linear"


@dataclass(frozen=True)
class RelationReport:
    """
    Slacks of the entropy-capacity relations (J, residual_linear in J^2).
    slack_vn and every slack_tsallis entry must be >= 0; residual_linear must vanish.
    """
    slack_vn: float
    slack_tsallis: Dict[float, float]
    residual_linear: float
    energy_scale: float

    def relative(self) -> Dict[str, object]:
        k = self.energy_scale
        return {
            "slack_vn": self.slack_vn / k,
            "slack_tsallis": {p: s / k for p, s in self.slack_tsallis.items()},
            "residual_linear": self.residual_linear / (k * k),
        }


def relation_report(state: BlochState, cfg: EnsembleConfig,
                    p_values: Sequence[float] = DEFAULT_P_VALUES) -> RelationReport:
    k = cfg.energy_scale
    capacity = capacity_exact(state, cfg)
    return RelationReport(
        slack_vn=capacity + von_neumann_entropy(state) * k - k,
        slack_tsallis={float(p): k - capacity - tsallis_entropy(state, p) * k for p in p_values},
        residual_linear=capacity ** 2 + 2.0 * linear_entropy(state) * k ** 2 - k ** 2,
        energy_scale=k,
    )


@dataclass
class RelationVerification:
    """Result of checking one state against all relations"""
    passed: bool
    relation_results: Dict[str, bool]
    violations: List[str]
    report: RelationReport
    timestamp: str = field(default_factory=lambda: datetime.now().isoformat())


class RelationChecker:
    """
    Checks states against the entropy-capacity relations.
    In strict mode a failed relation raises RelationViolationError.
    """

    def __init__(self, cfg: EnsembleConfig, p_values: Sequence[float] = DEFAULT_P_VALUES,
                 tolerance: float = RELATIVE_TOL, strict: bool = True):
        self.cfg = cfg
        self.p_values = tuple(float(p) for p in p_values)
        self.tolerance = tolerance
        self.strict = strict
        self.relation_rules: Dict[EntropyRelation, Callable[[RelationReport], bool]] = {
            EntropyRelation.VON_NEUMANN: self._check_von_neumann,
            EntropyRelation.TSALLIS: self._check_tsallis,
            EntropyRelation.LINEAR: self._check_linear,
        }
        self.verification_log: List[RelationVerification] = []

    def verify(self, state: BlochState) -> RelationVerification:
        report = relation_report(state, self.cfg, self.p_values)
        relation_results = {}
        violations = []
        for relation, check in self.relation_rules.items():
            passed = check(report)
            relation_results[relation.value] = passed
            if not passed:
                violations.append(f"Violated: {relation.value}")

        verification = RelationVerification(
            passed=not violations,
            relation_results=relation_results,
            violations=violations,
            report=report,
        )
        self.verification_log.append(verification)

        if violations:
            logger.warning(f"Relation check failed for {state}: {violations}")
            if self.strict:
                raise RelationViolationError(f"state {state} violates {violations}")
        return verification

    def _check_von_neumann(self, report: RelationReport) -> bool:
        return report.slack_vn >= -self.tolerance * report.energy_scale

    def _check_tsallis(self, report: RelationReport) -> bool:
        return all(s >= -self.tolerance * report.energy_scale for s in report.slack_tsallis.values())

    def _check_linear(self, report: RelationReport) -> bool:
        return abs(report.residual_linear) <= self.tolerance * report.energy_scale ** 2

    def get_verification_history(self) -> List[RelationVerification]:
        return self.verification_log.copy()

    def last(self) -> Optional[RelationVerification]:
        return self.verification_log[-1] if self.verification_log else None
