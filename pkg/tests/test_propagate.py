import numpy as np
import pytest
from hypothesis import given, strategies as st

from infodyn import (BoxOverflowError, IdentityViolation, Potential, coherent_state,
                     energy, evolve, free_gaussian_at, gaussian_packet, ho_eigenstate,
                     hydrodynamic_energy, make_grid, moments)

from conftest import GRID

HO = Potential.harmonic(1.0)


def l2(a, b, grid):
    return float(np.sqrt(np.sum(np.abs(a - b) ** 2) * grid.dx))


def l2_up_to_phase(a, b, grid):
    overlap = np.sum(np.conj(a) * b) * grid.dx
    return float(np.sqrt(max(2 - 2 * abs(overlap), 0.0)))


def coherent_exact(alpha, t, grid):
    # alpha(t) = alpha exp(-i t) for omega = 1; the global phase is not tracked
    return coherent_state(alpha * np.exp(-1j * t), 1.0, grid).psi


def test_potential_values():
    x = np.array([-1.0, 0.0, 2.0])
    assert np.allclose(Potential.free()(x), 0)
    assert np.allclose(Potential.harmonic(2.0)(x), 2 * x ** 2)
    d = Potential.driven_harmonic(1.0, 0.5, 2.0)
    t = 0.3
    w = 1 + 0.5 * np.sin(2 * t)
    assert np.allclose(d(x, t), 0.5 * w ** 2 * x ** 2)
    h = 1e-6
    fd = (d(x, t + h) - d(x, t - h)) / (2 * h)
    assert np.allclose(d.time_derivative(x, t), fd, atol=1e-8)
    assert not d.is_static and HO.is_static


def test_potential_validation():
    with pytest.raises(ValueError):
        Potential("square")
    with pytest.raises(ValueError):
        Potential.harmonic(0.0)
    with pytest.raises(ValueError):
        Potential.tabulated([1.0, np.nan])
    with pytest.raises(ValueError):
        Potential.tabulated(np.zeros(5))(GRID.x)


def test_ground_state_only_gains_phase():
    wf = ho_eigenstate(0, 1.0, GRID)
    tr = evolve(wf, HO, 1e-3, 1000, 100)
    # splitting error only, O(dt**2) per unit time
    assert l2(tr.psi[-1], wf.psi * np.exp(-0.5j), GRID) < 1e-6


def test_free_packet_matches_closed_form():
    wf = gaussian_packet(0.0, 1.0, 0.5, GRID)
    tr = evolve(wf, Potential.free(), 1e-3, 1000, 1000)
    exact = free_gaussian_at(1.0, 0.0, 1.0, 0.5, GRID)
    assert l2(tr.psi[-1], exact.psi, GRID) < 1e-10
    assert moments(tr[-1]).var_x == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("t", [np.pi / 2, np.pi, 2.0])
def test_coherent_state_follows_classical_orbit(t):
    n = int(round(t / 1e-3))
    # n steps of exactly t / n
    tr = evolve(coherent_state(1.0, 1.0, GRID), HO, t / n, n, n)
    m = moments(tr[-1])
    assert m.mean_x == pytest.approx(np.sqrt(2) * np.cos(t), abs=1e-6)
    assert m.mean_p == pytest.approx(-np.sqrt(2) * np.sin(t), abs=1e-6)
    assert m.var_x == pytest.approx(0.5, abs=1e-6)


def test_split_step_second_order_on_oscillator():
    errs = []
    for dt in (0.1, 0.05, 0.025):
        n = int(round(1 / dt))
        tr = evolve(coherent_state(1.0, 1.0, GRID), HO, dt, n, n)
        errs.append(l2_up_to_phase(tr.psi[-1], coherent_exact(1.0, 1.0, GRID), GRID))
    ratios = np.array(errs[:-1]) / np.array(errs[1:])
    assert np.all(np.abs(ratios - 4) < 0.2)


def test_driven_second_order_richardson():
    d = Potential.driven_harmonic(1.0, 0.1, 0.5)
    wf = coherent_state(0.5, 1.0, GRID)
    ref = evolve(wf, d, 1e-3, 2000, 2000).psi[-1]
    errs = []
    for dt in (0.04, 0.02, 0.01):
        n = int(round(2 / dt))
        errs.append(l2(evolve(wf, d, dt, n, n).psi[-1], ref, GRID))
    ratios = np.array(errs[:-1]) / np.array(errs[1:])
    assert np.all(np.abs(ratios - 4) < 0.3)


def test_unitarity_over_ten_thousand_steps():
    tr = evolve(coherent_state(1 + 1j, 1.0, GRID), HO, 1e-3, 10_000, 10_000)
    assert abs(np.sum(np.abs(tr.psi[-1]) ** 2) * GRID.dx - 1) < 1e-8


def test_crank_nicolson_agrees_with_split_step():
    wf = coherent_state(1.0, 1.0, GRID)
    a = evolve(wf, HO, 1e-3, 1000, 1000).psi[-1]
    b = evolve(wf, HO, 1e-3, 1000, 1000, "crank_nicolson", laplacian="compact4").psi[-1]
    assert l2(a, b, GRID) < 1e-4


def test_crank_nicolson_central_laplacian_is_second_order_in_dx():
    errs = []
    for n in (256, 512, 1024):
        g = make_grid(-20, 20, n)
        tr = evolve(coherent_state(1.0, 1.0, g), HO, 2e-4, 5000, 5000, "crank_nicolson")
        errs.append(l2_up_to_phase(tr.psi[-1], coherent_exact(1.0, 1.0, g), g))
    ratios = np.array(errs[:-1]) / np.array(errs[1:])
    assert np.all(np.abs(ratios - 4) < 0.2)


def test_crank_nicolson_driven_refactors():
    d = Potential.driven_harmonic(1.0, 0.1, 0.5)
    wf = coherent_state(0.5, 1.0, GRID)
    a = evolve(wf, d, 1e-3, 200, 200).psi[-1]
    b = evolve(wf, d, 1e-3, 200, 200, "crank_nicolson", laplacian="compact4").psi[-1]
    assert l2(a, b, GRID) < 1e-4


def test_energy_conserved_over_ten_time_units():
    wf = coherent_state(1.0 + 0.5j, 1.0, GRID)
    tr = evolve(wf, HO, 1e-3, 10_000, 500)
    E = np.array([energy(w, HO) for w in tr])
    assert np.max(np.abs(E / E[0] - 1)) < 1e-6


def test_snapshots_and_times():
    tr = evolve(ho_eigenstate(0, 1.0, GRID), HO, 1e-3, 100, 20, t0=2.0)
    assert len(tr) == 6
    assert np.allclose(tr.times, 2.0 + 0.02 * np.arange(6))
    assert tr.dt_snapshot == pytest.approx(0.02)
    assert len(tr.snapshots) == 6
    with pytest.raises(ValueError):
        tr.psi[0, 0] = 0


@pytest.mark.parametrize("kwargs", [
    {"dt": 0.0}, {"n_steps": 10, "stride": 3}, {"scheme": "euler"}, {"dt": 1.0},
    {"stride": 0},
])
def test_evolve_rejects_bad_arguments(kwargs):
    args = {"dt": 1e-3, "n_steps": 12, "stride": 1, "scheme": "split_step", **kwargs}
    with pytest.raises(ValueError):
        evolve(gaussian_packet(0, 5.0, 0.05, GRID), HO, args["dt"], args["n_steps"],
               args["stride"], args["scheme"])


def test_packet_leaving_the_box_is_caught():
    wf = gaussian_packet(10.0, 8.0, 0.5, GRID)
    with pytest.raises(BoxOverflowError):
        evolve(wf, Potential.free(), 1e-2, 200, 10)


def test_hydrodynamic_energy_examples():
    assert hydrodynamic_energy(ho_eigenstate(0, 1.0, GRID), HO) == pytest.approx(0.5, abs=1e-12)
    wf = gaussian_packet(0.0, 2.0, 0.5, GRID)
    assert hydrodynamic_energy(wf, Potential.free()) == pytest.approx(2.25, abs=1e-12)


@given(st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))
def test_hydrodynamic_energy_matches_operator(re, im):
    wf = coherent_state(complex(re, im), 1.0, GRID)
    h = hydrodynamic_energy(wf, HO)
    assert h == pytest.approx(energy(wf, HO), abs=1e-10)
    assert h == pytest.approx(0.5 + re * re + im * im, abs=1e-10)


def test_hydrodynamic_energy_raises_on_mismatch():
    with pytest.raises(IdentityViolation):
        hydrodynamic_energy(ho_eigenstate(0, 1.0, GRID), HO, tol=-1.0)
