"""Uniform periodic grid, quadrature, unitary Fourier transform and
spectral differentiation.

Everything downstream samples functions on a :class:`Grid1D`. The box is a
stand-in for the real line, so states are expected to have decayed to
numerical zero at the edges; :func:`edge_mass` is the monitor for that.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import BoxOverflowError, GridError

__all__ = [
    "GridError",
    "BoxOverflowError",
    "BoxOverflowWarning",
    "Grid1D",
    "WaveFunction",
    "MomentumWave",
    "make_grid",
    "quadrature",
    "to_momentum",
    "from_momentum",
    "spectral_derivative",
    "edge_mass",
    "check_edges",
    "warn_if_overflowing",
    "NORM_TOL",
    "EDGE_TOL",
]

NORM_TOL = 1e-10
EDGE_TOL = 1e-6


class BoxOverflowWarning(RuntimeWarning):
    """Probability has reached the edges of the periodic box."""


def _frozen(a):
    a = np.asarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Grid1D:
    """Uniform periodic lattice ``x_j = x_min + j*dx``, ``j = 0..n-1``.

    ``x_max`` is identified with ``x_min`` and is not a sample point.
    ``k`` holds the conjugate wavenumbers in FFT order.
    """

    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        n = self.n
        if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
            raise GridError(f"n must be an integer, got {n!r}")
        if n < 8 or n & (n - 1):
            raise GridError(f"n must be a power of two >= 8, got {n}")
        if not (np.isfinite(self.x_min) and np.isfinite(self.x_max)):
            raise GridError("grid bounds must be finite")
        if self.x_max <= self.x_min:
            raise GridError(
                f"x_max must exceed x_min (got {self.x_min}, {self.x_max})")

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def dx(self) -> float:
        return self.length / self.n

    @property
    def dk(self) -> float:
        return 2 * np.pi / self.length

    @cached_property
    def x(self) -> np.ndarray:
        return _frozen(self.x_min + self.dx * np.arange(self.n))

    @cached_property
    def k(self) -> np.ndarray:
        return _frozen(2 * np.pi * np.fft.fftfreq(self.n, d=self.dx))

    @property
    def k_values(self) -> np.ndarray:
        return self.k

    @cached_property
    def k_sorted(self) -> np.ndarray:
        """Wavenumbers in ascending order, ``-n/2 .. n/2-1`` times ``dk``."""
        return _frozen(np.fft.fftshift(self.k))


def make_grid(x_min: float, x_max: float, n: int) -> Grid1D:
    return Grid1D(float(x_min), float(x_max), n)


def _check_samples(f, grid: Grid1D, name="f"):
    f = np.asarray(f)
    if f.shape != (grid.n,):
        raise GridError(f"{name} has shape {f.shape}, expected ({grid.n},)")
    if not np.all(np.isfinite(f)):
        raise GridError(f"{name} contains NaN or Inf")
    return f


def quadrature(f, grid: Grid1D, space: str = "position") -> float:
    """Rectangle-rule integral of samples ``f`` over the box.

    With ``space="momentum"`` the samples are taken to live on ``grid.k``
    and the measure is ``dk``.
    """
    f = _check_samples(f, grid)
    if space == "position":
        h = grid.dx
    elif space == "momentum":
        h = grid.dk
    else:
        raise ValueError(f"unknown space {space!r}")
    return float(np.sum(f) * h) if not np.iscomplexobj(f) else complex(np.sum(f) * h)


@dataclass(frozen=True, eq=False)
class WaveFunction:
    """Complex amplitudes on a grid with unit L2 norm."""

    grid: Grid1D
    psi: np.ndarray = field(repr=False)

    def __post_init__(self):
        psi = np.array(_check_samples(self.psi, self.grid, "psi"),
                       dtype=complex)
        psi.setflags(write=False)
        object.__setattr__(self, "psi", psi)
        err = abs(self.norm() - 1.0)
        if err > NORM_TOL:
            raise GridError(f"wavefunction not normalized (|norm-1| = {err:.3g})")

    @classmethod
    def from_samples(cls, grid: Grid1D, values, normalize=True) -> "WaveFunction":
        values = np.asarray(values, dtype=complex)
        if normalize:
            nrm = np.sqrt(np.sum(np.abs(values) ** 2) * grid.dx)
            if not nrm > 0:
                raise GridError("cannot normalize a zero vector")
            values = values / nrm
        return cls(grid, values)

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.psi) ** 2

    def norm(self) -> float:
        return float(np.sum(np.abs(self.psi) ** 2) * self.grid.dx)

    def with_global_phase(self, theta: float) -> "WaveFunction":
        return WaveFunction(self.grid, self.psi * np.exp(1j * theta))


@dataclass(frozen=True, eq=False)
class MomentumWave:
    """Samples of the continuous Fourier transform on ``grid.k`` (FFT order)."""

    grid: Grid1D
    phi: np.ndarray = field(repr=False)

    def __post_init__(self):
        phi = np.array(_check_samples(self.phi, self.grid, "phi"), dtype=complex)
        phi.setflags(write=False)
        object.__setattr__(self, "phi", phi)
        err = abs(self.norm() - 1.0)
        if err > NORM_TOL:
            raise GridError(f"momentum amplitude not normalized (|norm-1| = {err:.3g})")

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.phi) ** 2

    def norm(self) -> float:
        return float(np.sum(np.abs(self.phi) ** 2) * self.grid.dk)


def _phase_factor(grid: Grid1D):
    return np.exp(-1j * grid.k * grid.x_min)


def to_momentum(wf: WaveFunction) -> MomentumWave:
    """Approximate ``(2 pi)^-1/2 * int psi(x) exp(-ikx) dx`` on ``grid.k``."""
    g = wf.grid
    phi = np.fft.fft(wf.psi) * (g.dx / np.sqrt(2 * np.pi)) * _phase_factor(g)
    return MomentumWave(g, phi)


def from_momentum(mw: MomentumWave) -> WaveFunction:
    """Inverse of :func:`to_momentum`."""
    g = mw.grid
    psi = np.fft.ifft(mw.phi / _phase_factor(g)) * (np.sqrt(2 * np.pi) / g.dx)
    return WaveFunction(g, psi)


def spectral_derivative(f, grid: Grid1D, order: int = 1) -> np.ndarray:
    """Derivative of periodic samples by multiplication with ``(ik)**order``.

    For odd orders the Nyquist coefficient is dropped so that real input
    gives real output. Real input returns a real array.
    """
    if order not in (1, 2):
        raise ValueError(f"unsupported derivative order {order}")
    f = _check_samples(f, grid)
    mult = (1j * grid.k) ** order
    if order % 2:
        mult = mult.copy()
        mult[grid.n // 2] = 0.0
    out = np.fft.ifft(mult * np.fft.fft(f))
    if not np.iscomplexobj(f):
        return out.real
    return out


def edge_mass(density, grid: Grid1D, band: int | None = None) -> float:
    """Probability inside the outer ``band`` points on each side of the box.

    Defaults to ``n // 32`` points per side.
    """
    band = grid.n // 32 if band is None else band
    density = np.asarray(density)
    return float((np.sum(density[:band]) + np.sum(density[-band:])) * grid.dx)


def warn_if_overflowing(density, grid: Grid1D, tol: float = EDGE_TOL) -> float:
    m = edge_mass(density, grid)
    if m > tol:
        warnings.warn(f"edge mass {m:.3g} exceeds {tol:g}; enlarge the box",
                      BoxOverflowWarning, stacklevel=2)
    return m


def check_edges(density, grid: Grid1D, tol: float = EDGE_TOL) -> float:
    """Like :func:`warn_if_overflowing` but raises :class:`BoxOverflowError`."""
    m = edge_mass(density, grid)
    if m > tol:
        raise BoxOverflowError(f"edge mass {m:.3g} exceeds {tol:g}; enlarge the box")
    return m
