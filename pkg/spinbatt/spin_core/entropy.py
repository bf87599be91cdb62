"""
Entropy measures of the single-spin density, expressed through its eigenvalues
lambda_pm = (1 +/- S)/2.
"""

import logging
from typing import Tuple

from scipy.stats import entropy as _shannon

from ..core.errors import DomainError
from .state import BlochState

logger = logging.getLogger(__name__)


def eigenvalues(state: BlochState) -> Tuple[float, float]:
    """(lambda_plus, lambda_minus), clipped to [0, 1]"""
    s = min(state.length, 1.0)
    return 0.5 * (1.0 + s), 0.5 * (1.0 - s)


def von_neumann_entropy(state: BlochState) -> float:
    """Base-2 von Neumann entropy, with 0 log 0 = 0"""
    lam_plus, lam_minus = eigenvalues(state)
    return float(_shannon([lam_plus, lam_minus], base=2))


def tsallis_entropy(state: BlochState, p: float) -> float:
    """Tsallis entropy of order p >= 2"""
    if not p >= 2:
        raise DomainError(f"Tsallis order must satisfy p >= 2, got {p!r}")
    lam_plus, lam_minus = eigenvalues(state)
    return (1.0 - lam_minus ** p - lam_plus ** p) / (p - 1.0)


def linear_entropy(state: BlochState) -> float:
    """L^2 = T_2 = (1 - S^2)/2"""
    s = state.length
    return 0.5 * (1.0 - s * s)
