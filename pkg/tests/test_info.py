import numpy as np
import pytest
from hypothesis import given, strategies as st

from infodyn import (ENTROPIC_BOUND, InequalityViolation, StateSpec, audit_inequalities,
                     coherent_state, fisher_information, free_gaussian_at, gaussian_packet,
                     ho_eigenstate, make_grid, momentum_entropy, moments, random_ho_superposition, shannon_entropy,
                     superposition, to_momentum)
from infodyn.info import classical_momentum_variance, operator_momentum_moments

from conftest import GRID

# -int rho ln rho for oscillator eigenstates (hbar = m = omega = 1), from
# 30-digit adaptive quadrature of the closed-form densities
HO_ENTROPY = {
    0: 1.0723649429247001,
    1: 1.3427277883861783,
    2: 1.4986092688519862,
    3: 1.6097118403500270,
}
# (psi_0 + psi_1)/sqrt(2) at t = 0, same method
BEAT_ENTROPY = 0.9577253013469576

BEAT = StateSpec("superposition", components=(StateSpec("ho_eigenstate", {"n": 0}),
                                              StateSpec("ho_eigenstate", {"n": 1})),
                 coeffs=(2 ** -0.5, 2 ** -0.5))


def test_entropic_bound_value():
    assert ENTROPIC_BOUND == pytest.approx(2.1447298858494002, abs=1e-15)


@pytest.mark.parametrize("var0", [0.1, 0.5, 2.0])
def test_gaussian_entropy_and_fisher(var0):
    wf = gaussian_packet(0.4, 0.0, var0, GRID)
    assert shannon_entropy(wf.density, GRID) == pytest.approx(
        0.5 * np.log(2 * np.pi * np.e * var0), abs=1e-12)
    assert fisher_information(wf.density, GRID) == pytest.approx(1 / var0, rel=1e-10)


@pytest.mark.parametrize("n", sorted(HO_ENTROPY))
def test_eigenstate_entropies(n):
    # rho ln rho is only C^1 at a node, so nodal states converge as dx**3
    tol = 1e-10 if n == 0 else 5e-6
    wf = ho_eigenstate(n, 1.0, GRID)
    assert shannon_entropy(wf.density, GRID) == pytest.approx(HO_ENTROPY[n], abs=tol)
    # the oscillator eigenfunctions are their own Fourier transforms up to phase
    assert momentum_entropy(wf) == pytest.approx(HO_ENTROPY[n], abs=tol)
    rho_p = to_momentum(wf).density
    coarse = shannon_entropy(rho_p, GRID, "momentum")
    assert coarse == pytest.approx(HO_ENTROPY[n], abs=1e-10 if n == 0 else 2e-3)


def test_oversampling_leaves_smooth_spectra_alone():
    wf = coherent_state(1 - 1j, 1.0, GRID)
    coarse = shannon_entropy(to_momentum(wf).density, GRID, "momentum")
    assert momentum_entropy(wf, 1) == pytest.approx(coarse, abs=1e-14)
    assert momentum_entropy(wf, 8) == pytest.approx(coarse, abs=1e-12)


def test_nodal_entropy_converges_at_third_order():
    errs = []
    for n in (1024, 2048, 4096):
        g = make_grid(-20, 20, n)
        errs.append(abs(shannon_entropy(ho_eigenstate(1, 1.0, g).density, g) - HO_ENTROPY[1]))
    ratios = np.array(errs[:-1]) / np.array(errs[1:])
    assert np.all((ratios > 7) & (ratios < 9))


@pytest.mark.parametrize("n", [0, 1, 2, 3, 6])
def test_eigenstate_fisher(n):
    # real states: F = 4 var_p = 4n + 2, including the nodes
    wf = ho_eigenstate(n, 1.0, GRID)
    assert fisher_information(wf.density, GRID) == pytest.approx(4 * n + 2, abs=1e-8)


def test_nodal_superposition_entropy():
    wf = superposition(BEAT.components, BEAT.coeffs, GRID)
    assert shannon_entropy(wf.density, GRID) == pytest.approx(BEAT_ENTROPY, abs=5e-6)
    assert moments(wf).var_x == pytest.approx(0.5, abs=1e-10)


def test_density_validation():
    with pytest.raises(ValueError):
        shannon_entropy(np.ones(GRID.n), GRID)
    rho = gaussian_packet(0, 0, 1, GRID).density.copy()
    rho[100] = -1e-3
    with pytest.raises(ValueError):
        fisher_information(rho, GRID)
    with pytest.raises(ValueError):
        shannon_entropy(np.ones(7), GRID)


@given(st.floats(-4, 4))
def test_entropy_translation_invariant(shift):
    a = gaussian_packet(0.0, 0.0, 0.7, GRID)
    b = gaussian_packet(shift, 0.0, 0.7, GRID)
    assert shannon_entropy(b.density, GRID) == pytest.approx(
        shannon_entropy(a.density, GRID), abs=1e-11)


def test_operator_and_fourier_momentum_agree():
    wf = coherent_state(0.7 - 0.4j, 1.3, GRID)
    mp, vp = operator_momentum_moments(wf)
    m = moments(wf)
    assert mp == pytest.approx(m.mean_p, abs=1e-12)
    assert vp == pytest.approx(m.var_p, abs=1e-11)


def test_ground_state_report():
    rep = audit_inequalities(ho_eigenstate(0, 1.0, GRID))
    assert rep.S_q == pytest.approx(0.5 * np.log(np.pi * np.e), abs=1e-12)
    assert rep.entropy_sum == pytest.approx(ENTROPIC_BOUND, abs=1e-12)
    assert rep.fisher == pytest.approx(2.0, abs=1e-10)
    # every chain is saturated by the unchirped Gaussian
    for name in ("entropic_uncertainty", "entropy_power_product", "heisenberg",
                 "stam_fisher", "stam_variance", "classical_momentum",
                 "fisher_momentum_bound"):
        assert abs(rep.slacks[name]) < 1e-10, name
    assert rep.entropy_power_product == pytest.approx(0.5, abs=1e-12)


def test_chirped_packet_splits_momentum_variance():
    # after free flight the phase is quadratic: var_p = var_cl + F/4
    wf = free_gaussian_at(1.0, 0.0, 0.0, 0.5, GRID)
    rep = audit_inequalities(wf)
    assert rep.var_x == pytest.approx(1.0, abs=1e-12)
    assert rep.var_p == pytest.approx(0.5, abs=1e-12)
    assert rep.fisher == pytest.approx(1.0, abs=1e-10)
    assert rep.var_p_cl == pytest.approx(0.25, abs=1e-10)
    assert abs(rep.fisher_identity_residual) < 1e-10
    assert rep.slacks["heisenberg"] > 0.2


def test_classical_variance_of_boosted_packet_vanishes():
    wf = gaussian_packet(0.0, 3.0, 0.5, GRID)
    assert classical_momentum_variance(wf) == pytest.approx(0.0, abs=1e-10)


@given(st.integers(0, 2 ** 32 - 1))
def test_random_superpositions_satisfy_every_bound(seed):
    wf = random_ho_superposition(np.random.default_rng(seed), GRID)
    rep = audit_inequalities(wf)
    assert not rep.violations()
    assert abs(rep.fisher_identity_residual) < 1e-6


@given(st.floats(0, 2 * np.pi))
def test_report_is_gauge_invariant(theta):
    wf = coherent_state(0.5 + 0.5j, 1.0, GRID)
    a = audit_inequalities(wf)
    b = audit_inequalities(wf.with_global_phase(theta))
    for k in a.slacks:
        assert a.slacks[k] == pytest.approx(b.slacks[k], abs=1e-10)
    assert a.fisher == pytest.approx(b.fisher, abs=1e-10)


def test_audit_raises_on_forced_violation():
    wf = ho_eigenstate(0, 1.0, GRID)
    # a negative tolerance turns the exact saturation into a failure
    with pytest.raises(InequalityViolation) as exc:
        audit_inequalities(wf, tol_slack=-1e-3)
    assert exc.value.slack < 1e-3
