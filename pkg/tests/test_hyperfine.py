"""
Tests for the 87Rb ground-manifold operators, master equation and integrator.
"""

import math

import numpy as np
import pytest

from spinbatt.core.errors import (
    ConfigurationError,
    DegenerateProjectionError,
    IntegrationError,
    InvalidStateError,
)
from spinbatt.core.units import HBAR
from spinbatt.hyperfine.integrator import (
    check_step,
    evolve,
    initial_density,
    steady_state,
    summarize,
)
from spinbatt.hyperfine.master import (
    MasterEquation,
    RateParams,
    electron_polarization,
    expectation,
    master_rhs,
    maximally_mixed,
    nuclear_part,
    project_battery_subspace,
    relaxation_terms,
    stretched_state,
    total_fz,
)
from spinbatt.hyperfine.operators import HyperfineParams, ground_hamiltonian, zeeman_hamiltonian

from .conftest import random_density

ZERO_FIELD = (0.0, 0.0, 0.0)
WEAK_FIELD = (0.0, 0.0, 1.0e-8)


def _commutator(a, b):
    return a @ b - b @ a


def test_spin_commutation_relations(ops):
    """Verify [J_x, J_y] = i J_z for S and I, and [S_k, I_j] = 0"""
    for (jx, jy, jz) in (ops.s, ops.i):
        assert np.max(np.abs(_commutator(jx, jy) - 1j * jz)) < 1e-14
        assert np.max(np.abs(_commutator(jy, jz) - 1j * jx)) < 1e-14
    for sk in ops.s:
        for ij in ops.i:
            assert np.max(np.abs(_commutator(sk, ij))) < 1e-14


def test_casimirs(ops):
    s_squared = sum(s @ s for s in ops.s)
    i_squared = sum(i @ i for i in ops.i)
    assert np.allclose(s_squared, 0.75 * np.eye(8), atol=1e-14)
    assert np.allclose(i_squared, 3.75 * np.eye(8), atol=1e-14)


def test_i_dot_s_spectrum(ops):
    """Verify I.S is diagonal with -5/4 on F=1 and +3/4 on F=2"""
    i_dot_s = ops.i_dot_s()
    expected = np.array([-1.25] * 3 + [0.75] * 5)
    assert np.allclose(i_dot_s, np.diag(expected), atol=1e-14)
    assert np.allclose(np.linalg.eigvalsh(i_dot_s), np.sort(expected), atol=1e-14)


def test_basis_order(ops):
    assert ops.basis[:3] == ((1, -1), (1, 0), (1, 1))
    assert ops.index(2, 2) == 7
    assert ops.index(2, 1) == 6


def test_fz_is_diagonal(ops):
    m_values = np.array([m for _, m in ops.basis], dtype=float)
    assert np.allclose(ops.fz, np.diag(m_values), atol=1e-14)


def test_zero_field_splitting(hyperfine_params):
    """Verify the F=2 / F=1 gap equals hbar * delta_hf"""
    energies = np.linalg.eigvalsh(ground_hamiltonian(hyperfine_params, ZERO_FIELD))
    gap = energies[-1] - energies[0]
    assert gap == pytest.approx(HBAR * hyperfine_params.delta_hf, rel=1e-12)


def test_weak_field_zeeman_slopes(hyperfine_params, ops):
    """Verify first-order Zeeman shifts g_F-like slopes in both multiplets"""
    p = hyperfine_params
    b = 1e-6
    a_g = p.a_g
    electron = p.g_s * p.mu_b * b
    nuclear = p.mu_i / p.nuclear_spin * b
    predicted = [-1.25 * a_g + m * (-0.25 * electron - 1.25 * nuclear) for m in (-1, 0, 1)]
    predicted += [0.75 * a_g + m * (0.25 * electron - 0.75 * nuclear) for m in (-2, -1, 0, 1, 2)]
    energies = np.linalg.eigvalsh(ground_hamiltonian(p, (0.0, 0.0, b), ops))
    assert np.max(np.abs(energies - np.sort(predicted))) < 1e-4 * electron

    zeeman = np.real(np.diag(zeeman_hamiltonian(p, (0.0, 0.0, b), ops)))
    assert zeeman[ops.index(2, 2)] > 0 > zeeman[ops.index(1, 1)]


def test_field_must_be_three_vector(hyperfine_params):
    with pytest.raises(ConfigurationError):
        ground_hamiltonian(hyperfine_params, (0.0, 1e-6))


def test_only_rb87_nuclear_spin():
    with pytest.raises(ConfigurationError):
        HyperfineParams(nuclear_spin=2.5)


def test_nuclear_part_of_mixed_and_stretched(ops):
    """Verify phi keeps the nuclear marginal and carries no electron spin"""
    assert np.allclose(nuclear_part(maximally_mixed(ops), ops), maximally_mixed(ops), atol=1e-15)
    phi = nuclear_part(stretched_state(ops), ops)
    populations = np.real(np.diag(phi))
    assert populations[ops.index(2, 2)] == pytest.approx(0.5)
    assert populations[ops.index(2, 1)] == pytest.approx(0.125)
    assert populations[ops.index(1, 1)] == pytest.approx(0.375)
    assert expectation(phi, ops.s[2]) == pytest.approx(0.0, abs=1e-15)
    assert expectation(phi, ops.i[2]) == pytest.approx(1.5)


def test_relaxation_terms_are_trace_free(ops, rng):
    """Verify every channel preserves the trace on random densities"""
    rates = RateParams(r_se=1.0, r_sd=1.0, r_wall=1.0, r_op=1.0, photon_spin=(0.3, -0.4, 0.5))
    for _ in range(100):
        rho = random_density(rng)
        assert np.trace(nuclear_part(rho, ops)).real == pytest.approx(1.0, abs=1e-12)
        for name, term in relaxation_terms(rho, ops, rates).items():
            assert abs(np.trace(term)) <= 1e-12, name


def test_rhs_is_hermitian_and_trace_free(hyperfine_params, rng):
    """Verify drho/dt is Hermitian and traceless in the full frame"""
    rates = RateParams(r_se=50.0, r_sd=1.0, r_wall=2.0, r_op=300.0, photon_spin=(0.0, 0.6, 0.8))
    equation = MasterEquation(hyperfine_params, rates, (1e-7, 0.0, 2e-7))
    for _ in range(20):
        drho = equation(random_density(rng))
        scale = np.max(np.abs(drho))
        assert np.max(np.abs(drho - drho.conj().T)) <= 1e-12 * scale
        assert abs(np.trace(drho)) <= 1e-12 * scale


def test_master_rhs_without_rates_is_unitary(hyperfine_params, rng):
    rho = random_density(rng)
    drho = master_rhs(rho, hyperfine_params, RateParams(), WEAK_FIELD)
    assert abs(np.trace(drho)) <= 1e-12 * np.max(np.abs(drho))


def test_mixed_state_is_fixed_point(hyperfine_params, ops):
    """Verify I/8 is stationary without field and without pumping"""
    rates = RateParams(r_se=100.0, r_sd=10.0, r_wall=5.0)
    equation = MasterEquation(hyperfine_params, rates, ZERO_FIELD)
    assert np.max(np.abs(equation(maximally_mixed(ops)))) < 1e-12


def test_non_hermitian_density_rejected(hyperfine_params, ops):
    rho = maximally_mixed(ops).copy()
    rho[0, 1] = 0.1
    with pytest.raises(InvalidStateError):
        master_rhs(rho, hyperfine_params, RateParams(r_se=1.0), ZERO_FIELD)


def test_invalid_rates():
    with pytest.raises(ConfigurationError):
        RateParams(r_se=-1.0)
    with pytest.raises(ConfigurationError):
        RateParams(photon_spin=(1.0, 1.0, 0.0))


def test_step_guard(hyperfine_params):
    """Verify dt above 0.1 / fastest rate is refused"""
    full_frame = MasterEquation(hyperfine_params, RateParams(r_op=10.0), WEAK_FIELD)
    with pytest.raises(ConfigurationError):
        check_step(1e-6, full_frame)
    rotating = MasterEquation(hyperfine_params, RateParams(r_op=2000.0), WEAK_FIELD, rotating_frame=True)
    check_step(4e-5, rotating)
    with pytest.raises(ConfigurationError):
        check_step(1e-4, rotating)


def test_optical_pumping_reaches_stretched_state(hyperfine_params, ops):
    """Verify sigma+ pumping from I/8 puts >= 99% in |2,2> within 50 ms"""
    rates = RateParams(r_se=50.0, r_sd=0.5, r_wall=0.5, r_op=2000.0, photon_spin=(0.0, 0.0, 1.0))
    equation = MasterEquation(hyperfine_params, rates, WEAK_FIELD, rotating_frame=True)
    trajectory = evolve(maximally_mixed(ops), 0.05, 4e-5, equation, stride=25)
    populations = trajectory.populations()
    assert populations[-1, ops.index(2, 2)] >= 0.99
    assert electron_polarization(trajectory.final, ops) > 0.98
    assert np.allclose(populations.sum(axis=1), 1.0, atol=1e-9)

    steady = steady_state(equation, guess=trajectory.final)
    assert np.max(np.abs(steady - trajectory.final)) < 1e-3


def test_rk4_is_fourth_order(hyperfine_params, ops):
    """Verify halving the step cuts the error by about 16"""
    rates = RateParams(r_se=300.0, r_sd=200.0, r_wall=100.0, r_op=500.0, photon_spin=(0.6, 0.0, 0.8))
    equation = MasterEquation(hyperfine_params, rates, (1e-8, 0.0, 1e-8), rotating_frame=True)
    rho0 = maximally_mixed(ops)
    finals = [evolve(rho0, 2e-3, dt, equation).final for dt in (2e-5, 1e-5, 5e-6)]
    coarse_error = np.max(np.abs(finals[0] - finals[1]))
    fine_error = np.max(np.abs(finals[1] - finals[2]))
    assert coarse_error > 1e-12
    assert 12.0 < coarse_error / fine_error < 20.0


def test_spin_exchange_conserves_total_fz(hyperfine_params, ops):
    """Verify spin exchange redistributes but conserves <F_z>"""
    equation = MasterEquation(hyperfine_params, RateParams(r_se=1000.0), WEAK_FIELD, rotating_frame=True)
    rho0 = (ops.identity + 2.0 * ops.s[2]) / 8.0
    trajectory = evolve(rho0, 0.05, 5e-5, equation, stride=100)
    fz = trajectory.expectation(ops.fz)
    assert np.max(np.abs(fz - fz[0])) < 1e-10
    assert np.max(np.abs(trajectory.populations()[-1] - trajectory.populations()[0])) > 1e-3


def test_wall_relaxation_rate(hyperfine_params, ops):
    """Verify wall collisions relax toward I/8 at r_wall"""
    r_wall = 200.0
    equation = MasterEquation(hyperfine_params, RateParams(r_wall=r_wall), ZERO_FIELD, rotating_frame=True)
    t_final = 0.01
    trajectory = evolve(stretched_state(ops), t_final, 1e-4, equation)
    mixed = maximally_mixed(ops)
    d0 = np.max(np.abs(trajectory.states[0] - mixed))
    d1 = np.max(np.abs(trajectory.final - mixed))
    rate = -math.log(d1 / d0) / t_final
    assert rate == pytest.approx(r_wall, rel=0.01)


def test_spin_destruction(hyperfine_params, ops, rng):
    """Verify d<S_z>/dt = -r_sd <S_z> instantly and slow decay over time"""
    r_sd = 100.0
    rates = RateParams(r_sd=r_sd)
    rho = random_density(rng)
    term = relaxation_terms(rho, ops, rates)["spin_destruction"]
    assert expectation(term, ops.s[2]) == pytest.approx(-r_sd * expectation(rho, ops.s[2]), rel=1e-10)

    equation = MasterEquation(hyperfine_params, rates, ZERO_FIELD, rotating_frame=True)
    trajectory = evolve(stretched_state(ops), 0.2, 5e-4, equation, stride=50)
    sz = trajectory.expectation(ops.s[2])
    assert sz[0] == pytest.approx(0.5)
    assert abs(sz[-1]) < 0.25 * sz[0]
    assert total_fz(trajectory.final, ops) < total_fz(trajectory.states[0], ops)


def test_zeeman_precession_in_f2(hyperfine_params, ops):
    """Verify populations hold and the |2,2>-|2,1> coherence precesses at the Zeeman splitting"""
    equation = MasterEquation(hyperfine_params, RateParams(), WEAK_FIELD, rotating_frame=True)
    up, down = ops.index(2, 2), ops.index(2, 1)
    psi = np.zeros(8, dtype=complex)
    psi[up] = psi[down] = 1 / math.sqrt(2)
    rho0 = np.outer(psi, psi.conj())
    t_final = 2e-3
    trajectory = evolve(rho0, t_final, 2e-5, equation)
    h = equation.hamiltonian
    omega = float((h[up, up] - h[down, down]).real) / HBAR
    expected = rho0[up, down] * np.exp(-1j * omega * t_final)
    assert trajectory.final[up, down] == pytest.approx(expected, abs=1e-9)
    assert np.allclose(trajectory.populations()[-1], trajectory.populations()[0], atol=1e-12)


def test_trace_drift_is_detected(hyperfine_params, ops):
    """Verify a non-trace-preserving generator aborts the integration"""

    class LeakyEquation(MasterEquation):
        def rhs(self, rho):
            return self.ops.identity.copy()

    equation = LeakyEquation(hyperfine_params, RateParams(), ZERO_FIELD, rotating_frame=True)
    with pytest.raises(IntegrationError):
        evolve(maximally_mixed(ops), 0.01, 0.01, equation)


def test_initial_density_validation(hyperfine_params, ops):
    equation = MasterEquation(hyperfine_params, RateParams(r_wall=1.0), ZERO_FIELD, rotating_frame=True)
    not_positive = np.diag([1.5, -0.5, 0, 0, 0, 0, 0, 0]).astype(complex)
    with pytest.raises(InvalidStateError):
        evolve(not_positive, 0.01, 1e-3, equation)
    with pytest.raises(ConfigurationError):
        initial_density("thermal", ops)


def test_battery_subspace_projection(ops):
    """Verify the |2,2>/|2,1> block maps onto the two-level Bloch vector"""
    state, weight = project_battery_subspace(stretched_state(ops), ops)
    assert state.vector == pytest.approx([0.0, 0.0, 1.0])
    assert weight == pytest.approx(1.0)

    state, weight = project_battery_subspace(maximally_mixed(ops), ops)
    assert state.vector == pytest.approx([0.0, 0.0, 0.0])
    assert weight == pytest.approx(0.25)

    up, down = ops.index(2, 2), ops.index(2, 1)
    psi = np.zeros(8, dtype=complex)
    psi[up], psi[down] = 1 / math.sqrt(2), 1j / math.sqrt(2)
    state, _ = project_battery_subspace(np.outer(psi, psi.conj()), ops)
    assert state.vector == pytest.approx([0.0, 1.0, 0.0], abs=1e-15)


def test_degenerate_projection(ops):
    rho = np.zeros((8, 8), dtype=complex)
    rho[ops.index(1, 0), ops.index(1, 0)] = 1.0
    with pytest.raises(DegenerateProjectionError):
        project_battery_subspace(rho, ops)


def test_trajectory_export_and_summary(hyperfine_params, ops, ensemble):
    rates = RateParams(r_se=50.0, r_sd=0.5, r_wall=0.5, r_op=2000.0)
    equation = MasterEquation(hyperfine_params, rates, WEAK_FIELD, rotating_frame=True)
    trajectory = evolve(initial_density("mixed", ops), 1e-3, 4e-5, equation, stride=5)
    assert len(trajectory) == 6
    frame = trajectory.to_frame(ensemble)
    assert list(frame.columns[:2]) == ["time", "p1"]
    assert {"sz_mean", "bloch_z", "subspace_weight", "capacity_ev"} <= set(frame.columns)
    summary = summarize(trajectory, ensemble)
    assert summary["t_final"] == pytest.approx(1e-3)
    assert sum(summary["final_populations"]) == pytest.approx(1.0)
