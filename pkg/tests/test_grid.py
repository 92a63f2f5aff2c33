import numpy as np
import pytest
from hypothesis import given, strategies as st

from infodyn import (GridError, Grid1D, MomentumWave, WaveFunction, from_momentum,
                     gaussian_packet, make_grid, quadrature, spectral_derivative,
                     to_momentum)
from infodyn.errors import BoxOverflowError
from infodyn.grid import BoxOverflowWarning, check_edges, edge_mass, warn_if_overflowing

from conftest import GRID


def test_grid_geometry():
    g = make_grid(-20, 20, 2048)
    assert g.dx == pytest.approx(40 / 2048)
    assert g.dk == pytest.approx(2 * np.pi / 40)
    assert g.x[0] == -20 and g.x[-1] == pytest.approx(20 - g.dx)
    # FFT order: zero first, Nyquist at n/2 and negative
    assert g.k[0] == 0 and g.k[1024] == pytest.approx(-np.pi / g.dx)
    assert np.all(np.diff(g.k_sorted) > 0)


@pytest.mark.parametrize("n", [100, 6, 0, 1000])
def test_rejects_bad_sizes(n):
    with pytest.raises(GridError):
        make_grid(-1, 1, n)


def test_rejects_empty_box():
    with pytest.raises(GridError):
        make_grid(1.0, 1.0, 64)


def test_arrays_are_read_only():
    with pytest.raises(ValueError):
        GRID.x[0] = 1.0


def test_quadrature_of_gaussian():
    f = np.exp(-GRID.x ** 2)
    assert quadrature(f, GRID) == pytest.approx(np.sqrt(np.pi), abs=1e-13)


def test_quadrature_shape_check():
    with pytest.raises(GridError):
        quadrature(np.ones(10), GRID)


def test_wavefunction_requires_normalization():
    with pytest.raises(GridError):
        WaveFunction(GRID, np.ones(GRID.n))
    wf = WaveFunction.from_samples(GRID, np.exp(-GRID.x ** 2))
    assert wf.norm() == pytest.approx(1, abs=1e-14)


def test_zero_vector_cannot_be_normalized():
    with pytest.raises(GridError):
        WaveFunction.from_samples(GRID, np.zeros(GRID.n))


def test_gaussian_fourier_pair():
    # psi with variance 1/2 maps to a momentum Gaussian of variance 1/2
    wf = gaussian_packet(0.0, 0.0, 0.5, GRID)
    phi = to_momentum(wf).phi
    expect = np.pi ** -0.25 * np.exp(-GRID.k ** 2 / 2)
    assert np.max(np.abs(phi - expect)) < 1e-13


def test_momentum_carries_shift_phase():
    # a boost by p0 centres the momentum density on p0
    wf = gaussian_packet(1.3, 2.0, 0.5, GRID)
    rho_p = to_momentum(wf).density
    assert np.sum(GRID.k * rho_p) * GRID.dk == pytest.approx(2.0, abs=1e-12)


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.2, 2.0))
def test_parseval_and_round_trip(x0, p0, var0):
    wf = gaussian_packet(x0, p0, var0, GRID)
    mw = to_momentum(wf)
    assert mw.norm() == pytest.approx(1, abs=1e-12)
    back = from_momentum(mw)
    assert np.max(np.abs(back.psi - wf.psi)) < 1e-12


def test_momentum_wave_checks_norm():
    with pytest.raises(GridError):
        MomentumWave(GRID, np.ones(GRID.n))


@given(st.integers(1, 6))
def test_spectral_derivative_of_fourier_modes(m):
    g = make_grid(0.0, 2 * np.pi, 64)
    f = np.sin(m * g.x)
    assert np.allclose(spectral_derivative(f, g, 1), m * np.cos(m * g.x), atol=1e-12)
    assert np.allclose(spectral_derivative(f, g, 2), -m * m * f, atol=1e-11)


def test_spectral_derivative_is_linear(rng):
    a = np.exp(-GRID.x ** 2) * (1 + 0.3j)
    b = np.exp(-(GRID.x - 1) ** 2 / 3)
    lhs = spectral_derivative(2 * a - 5 * b, GRID)
    rhs = 2 * spectral_derivative(a, GRID) - 5 * spectral_derivative(b, GRID)
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_spectral_derivative_real_in_real_out():
    d = spectral_derivative(np.cos(GRID.x) * np.exp(-GRID.x ** 2), GRID)
    assert not np.iscomplexobj(d)


def test_odd_derivative_drops_nyquist():
    g = make_grid(0.0, 1.0, 16)
    alternating = (-1.0) ** np.arange(16)
    assert np.allclose(spectral_derivative(alternating, g, 1), 0)


def test_derivative_order_checked():
    with pytest.raises(ValueError):
        spectral_derivative(np.zeros(GRID.n), GRID, 3)


def test_edge_monitor():
    wf = gaussian_packet(0, 0, 0.5, GRID)
    assert edge_mass(wf.density, GRID) < 1e-100
    wide = np.exp(-GRID.x ** 2 / 200)
    wide /= wide.sum() * GRID.dx
    with pytest.warns(BoxOverflowWarning):
        warn_if_overflowing(wide, GRID)
    with pytest.raises(BoxOverflowError):
        check_edges(wide, GRID)


def test_global_phase():
    wf = gaussian_packet(0, 1, 0.5, GRID)
    w2 = wf.with_global_phase(0.7)
    assert np.allclose(w2.density, wf.density)
    assert np.allclose(w2.psi / wf.psi, np.exp(0.7j))


def test_grid_is_hashable_value():
    assert Grid1D(-1.0, 1.0, 64) == make_grid(-1.0, 1.0, 64)
