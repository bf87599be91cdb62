"""
Tests for the entropy-capacity relations and the RelationChecker.
Validates that every relation holds, saturates where expected, and that
strict mode enforces them.
"""

import math

import numpy as np
import pytest

from spinbatt.core.errors import DomainError, RelationViolationError
from spinbatt.core.units import RB87_GYROMAGNETIC_RATIO
from spinbatt.spin_core.entropy import eigenvalues, linear_entropy, tsallis_entropy, von_neumann_entropy
from spinbatt.spin_core.relations import EntropyRelation, RelationChecker, relation_report
from spinbatt.spin_core.state import BlochState, EnsembleConfig


@pytest.fixture
def checker(ensemble):
    return RelationChecker(ensemble)


def test_entropies_at_extremes():
    """Verify entropies of pure and maximally mixed states"""
    pure, mixed = BlochState(0.0, 0.0, 1.0), BlochState.unpolarized()
    assert von_neumann_entropy(pure) == 0.0
    assert von_neumann_entropy(mixed) == pytest.approx(1.0)
    assert linear_entropy(mixed) == pytest.approx(0.5)
    assert tsallis_entropy(mixed, 2.0) == pytest.approx(0.5)
    assert tsallis_entropy(pure, 3.0) == pytest.approx(0.0, abs=1e-15)


def test_half_polarized_reference_values():
    """Verify S = 0.5 gives H2(0.75) bits and a Tsallis-2 slack of k/8"""
    state = BlochState(0.0, 0.0, 0.5)
    assert von_neumann_entropy(state) == pytest.approx(0.8113, abs=5e-5)
    assert von_neumann_entropy(state) == pytest.approx(-0.75 * math.log2(0.75) - 0.25 * math.log2(0.25), rel=1e-12)
    assert tsallis_entropy(state, 2.0) == pytest.approx(0.375, rel=1e-12)
    unit = EnsembleConfig.from_energy_scale(1.0, n_atoms=1.0, gamma=RB87_GYROMAGNETIC_RATIO)
    report = relation_report(state, unit, p_values=[2.0])
    assert report.relative()["slack_tsallis"][2.0] == pytest.approx(0.125, rel=1e-12)
    assert report.slack_tsallis[2.0] == pytest.approx(0.125 * unit.energy_scale, rel=1e-12)


def test_eigenvalues_sum_to_one():
    lam_plus, lam_minus = eigenvalues(BlochState(0.3, 0.4, 0.0))
    assert lam_plus + lam_minus == pytest.approx(1.0)
    assert lam_plus - lam_minus == pytest.approx(0.5)


def test_tsallis_order_domain():
    """Verify Tsallis orders below 2 are rejected"""
    with pytest.raises(DomainError):
        tsallis_entropy(BlochState(0.0, 0.0, 0.5), 1.5)


def test_linear_entropy_equals_tsallis_two():
    state = BlochState(0.2, -0.1, 0.6)
    assert linear_entropy(state) == pytest.approx(tsallis_entropy(state, 2.0), abs=1e-15)


def test_relations_hold_for_random_states(checker, random_states):
    """Verify all relations on 10^4 seeded random states"""
    for state in random_states:
        result = checker.verify(state)
        assert result.passed
        assert all(result.relation_results.values())


def test_von_neumann_saturates_at_extremes(ensemble):
    """Verify the von Neumann slack vanishes for S = 0 and S = 1"""
    k = ensemble.energy_scale
    for state in (BlochState.unpolarized(), BlochState(0.0, 0.0, 1.0)):
        assert abs(relation_report(state, ensemble).slack_vn) <= 1e-12 * k


def test_tsallis_saturates_for_pure_states(ensemble):
    """Verify the Tsallis slack vanishes at S = 1 and not at S = 0"""
    k = ensemble.energy_scale
    pure = relation_report(BlochState(1.0, 0.0, 0.0), ensemble)
    assert all(abs(s) <= 1e-12 * k for s in pure.slack_tsallis.values())
    mixed = relation_report(BlochState.unpolarized(), ensemble)
    assert mixed.slack_tsallis[2.0] == pytest.approx(0.5 * k)


def test_tsallis_slack_grows_with_order(ensemble):
    """Verify the Tsallis slack is non-decreasing in p"""
    p_values = [2.0, 2.5, 3.0, 5.0, 10.0, 50.0]
    for length in np.linspace(0.0, 1.0, 21):
        report = relation_report(BlochState(0.0, 0.0, float(length)), ensemble, p_values)
        slacks = [report.slack_tsallis[p] for p in p_values]
        assert all(b >= a - 1e-12 * ensemble.energy_scale for a, b in zip(slacks, slacks[1:]))


def test_linear_residual_vanishes(ensemble):
    report = relation_report(BlochState.from_polar(0.7, 1.1, 0.4), ensemble)
    assert abs(report.relative()["residual_linear"]) <= 1e-12


def test_strict_mode_raises_on_violation(ensemble):
    """Verify strict mode raises when a relation fails"""
    checker = RelationChecker(ensemble, strict=True)
    checker.relation_rules[EntropyRelation.LINEAR] = lambda report: False
    with pytest.raises(RelationViolationError):
        checker.verify(BlochState(0.0, 0.0, 0.5))


def test_lenient_mode_reports_violation(ensemble):
    """Verify lenient mode records the violation instead of raising"""
    checker = RelationChecker(ensemble, strict=False)
    checker.relation_rules[EntropyRelation.VON_NEUMANN] = lambda report: False
    result = checker.verify(BlochState(0.0, 0.0, 0.5))
    assert not result.passed
    assert result.violations == ["Violated: von_neumann"]
    assert result.relation_results["tsallis"]


def test_verification_history(checker):
    """Verify audit trail is maintained"""
    checker.verify(BlochState(0.0, 0.0, 0.2))
    checker.verify(BlochState(0.1, 0.0, 0.2))
    history = checker.get_verification_history()
    assert len(history) == 2
    assert all(v.passed for v in history)
    assert checker.last() is history[-1]
    assert math.isclose(history[0].report.energy_scale, checker.cfg.energy_scale)
