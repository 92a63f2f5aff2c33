"""Time evolution under ``i psi_t = -D psi'' + V psi / (2 m D)``.

The production scheme is Strang splitting with exact kinetic phases in
momentum space. Crank-Nicolson on a tridiagonal (cyclic) Laplacian is kept
as an independent cross-check.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .errors import BoxOverflowError, IdentityViolation, UnitarityError
from .grid import EDGE_TOL, Grid1D, WaveFunction, edge_mass
from .hydro import decompose

__all__ = [
    "Potential",
    "Trajectory",
    "evolve",
    "energy",
    "hydrodynamic_energy",
    "SCHEMES",
]

SCHEMES = ("split_step", "crank_nicolson")
POTENTIAL_KINDS = ("free", "harmonic", "time_dependent_harmonic", "tabulated")


@dataclass(frozen=True, eq=False)
class Potential:
    """External potential ``V(x, t)`` in energy units.

    Build with the classmethods rather than directly. For the driven
    oscillator ``omega(t) = omega * (1 + amplitude * sin(frequency * t))``.
    """

    kind: str
    omega: float = 1.0
    mass: float = 1.0
    amplitude: float = 0.0
    frequency: float = 0.0
    values: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in POTENTIAL_KINDS:
            raise ValueError(f"unknown potential kind {self.kind!r}")
        if self.kind in ("harmonic", "time_dependent_harmonic") and not self.omega > 0:
            raise ValueError("omega must be positive")
        if self.kind == "tabulated":
            vals = np.array(self.values, dtype=float)
            if vals.ndim != 1 or not np.all(np.isfinite(vals)):
                raise ValueError("tabulated potential must be a finite 1-D array")
            vals.setflags(write=False)
            object.__setattr__(self, "values", vals)

    @classmethod
    def free(cls):
        return cls("free")

    @classmethod
    def harmonic(cls, omega, mass=1.0):
        return cls("harmonic", omega=omega, mass=mass)

    @classmethod
    def driven_harmonic(cls, omega, amplitude, frequency, mass=1.0):
        return cls("time_dependent_harmonic", omega=omega, mass=mass,
                   amplitude=amplitude, frequency=frequency)

    @classmethod
    def tabulated(cls, values):
        return cls("tabulated", values=values)

    @property
    def is_static(self) -> bool:
        return self.kind != "time_dependent_harmonic" or self.amplitude == 0

    def omega_at(self, t: float) -> float:
        if self.kind == "time_dependent_harmonic":
            return self.omega * (1 + self.amplitude * np.sin(self.frequency * t))
        return self.omega

    def __call__(self, x, t: float = 0.0) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.kind == "free":
            return np.zeros_like(x)
        if self.kind == "tabulated":
            if self.values.shape != x.shape:
                raise ValueError("tabulated potential does not match the grid")
            return self.values
        return 0.5 * self.mass * self.omega_at(t) ** 2 * x ** 2

    def time_derivative(self, x, t: float = 0.0) -> np.ndarray:
        """``dV/dt`` at fixed ``x``."""
        x = np.asarray(x, dtype=float)
        if self.kind != "time_dependent_harmonic":
            return np.zeros_like(x)
        w = self.omega_at(t)
        dw = self.omega * self.amplitude * self.frequency * np.cos(self.frequency * t)
        return self.mass * w * dw * x ** 2


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Snapshots of an evolution, one row of ``psi`` per entry of ``times``."""

    grid: Grid1D
    times: np.ndarray = field(repr=False)
    psi: np.ndarray = field(repr=False)
    dt: float
    stride: int
    scheme: str
    potential: Potential
    D: float = 0.5
    mass: float = 1.0

    def __post_init__(self):
        for name in ("times", "psi"):
            a = np.array(getattr(self, name))
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    def __len__(self):
        return len(self.times)

    def __getitem__(self, i) -> WaveFunction:
        return WaveFunction.from_samples(self.grid, self.psi[i])

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    @property
    def snapshots(self):
        return list(self)

    @property
    def dt_snapshot(self) -> float:
        return self.dt * self.stride


def _populated_kmax(psi, grid: Grid1D, rel=1e-14):
    power = np.abs(np.fft.fft(psi)) ** 2
    return float(np.abs(grid.k)[power > rel * power.max()].max())


class _SplitStep:
    def __init__(self, grid, pot, dt, D, mass):
        self.grid, self.pot, self.dt = grid, pot, dt
        self.hbar = 2 * mass * D
        self.half_kin = np.exp(-0.5j * D * grid.k ** 2 * dt)
        self.full_kin = self.half_kin ** 2
        self.static_phase = (np.exp(-1j * pot(grid.x) * dt / self.hbar)
                             if pot.is_static else None)

    def _pot_phase(self, t_mid):
        if self.static_phase is not None:
            return self.static_phase
        return np.exp(-1j * self.pot(self.grid.x, t_mid) * self.dt / self.hbar)

    def advance(self, psi, t, steps):
        """``steps`` Strang steps from time ``t``; consecutive kinetic halves fused."""
        fft, ifft, dt = np.fft.fft, np.fft.ifft, self.dt
        phi = self.half_kin * fft(psi)
        for j in range(steps):
            psi = self._pot_phase(t + (j + 0.5) * dt) * ifft(phi)
            phi = (self.full_kin if j < steps - 1 else self.half_kin) * fft(psi)
        return ifft(phi)


class _CrankNicolson:
    """Cayley step ``(M + i dt K/2) psi' = (M - i dt K/2) psi`` on a cyclic stencil.

    ``laplacian="central2"`` is the plain three-point Laplacian (``M = I``).
    ``"compact4"`` is the fourth-order Numerov form, ``M = I + dx^2/12 L``
    and ``K = -D L + M W``, which keeps the system tridiagonal.
    """

    def __init__(self, grid, pot, dt, D, mass, laplacian="central2"):
        if laplacian not in ("central2", "compact4"):
            raise ValueError(f"unknown laplacian {laplacian!r}")
        n, h = grid.n, grid.dx
        self.grid, self.pot, self.dt = grid, pot, dt
        self.hbar = 2 * mass * D
        main, off = -2.0 * np.ones(n), np.ones(n - 1)
        lap = sp.diags([off, main, off], [-1, 0, 1], format="lil")
        lap[0, n - 1] = lap[n - 1, 0] = 1.0
        self.lap_h2 = lap.tocsc()
        eye = sp.identity(n, format="csc")
        self.M = eye + self.lap_h2 / 12 if laplacian == "compact4" else eye
        self.kin = -D * self.lap_h2 / h ** 2
        self._lu = None
        if pot.is_static:
            self._lu, self._rhs = self._factor(0.0)

    def _factor(self, t):
        W = sp.diags(self.pot(self.grid.x, t) / self.hbar)
        K = self.kin + self.M @ W
        A = (self.M + 0.5j * self.dt * K).tocsc()
        B = (self.M - 0.5j * self.dt * K).tocsc()
        return splu(A), B

    def advance(self, psi, t, steps):
        for j in range(steps):
            if self._lu is None:
                lu, rhs = self._factor(t + (j + 0.5) * self.dt)
            else:
                lu, rhs = self._lu, self._rhs
            psi = lu.solve(rhs @ psi)
        return psi


def evolve(wf0: WaveFunction, pot: Potential, dt: float, n_steps: int, stride: int = 1,
           scheme: str = "split_step", *, D: float = 0.5, mass: float = 1.0,
           t0: float = 0.0, laplacian: str = "central2", norm_tol: float = 1e-6,
           edge_tol: float = EDGE_TOL) -> Trajectory:
    """Evolve ``wf0`` for ``n_steps`` steps, keeping every ``stride``-th state.

    The initial state is always the first snapshot. Norm and edge mass are
    checked at every snapshot; exceeding ``norm_tol`` raises
    :class:`UnitarityError` and exceeding ``edge_tol`` raises
    :class:`BoxOverflowError`.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    if n_steps < 0 or stride < 1:
        raise ValueError("need n_steps >= 0 and stride >= 1")
    if n_steps % stride:
        raise ValueError(f"n_steps ({n_steps}) must be a multiple of stride ({stride})")
    if scheme not in SCHEMES:
        raise ValueError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    g = wf0.grid
    # only modes that carry weight need an accurate kinetic phase
    kmax = _populated_kmax(wf0.psi, g)
    if dt * D * kmax ** 2 >= np.pi:
        raise ValueError(f"dt={dt} too large: populated band reaches |k|={kmax:.3g}, "
                         f"dt*D*k^2 = {dt * D * kmax ** 2:.3g} >= pi")
    if scheme == "split_step":
        stepper = _SplitStep(g, pot, dt, D, mass)
    else:
        stepper = _CrankNicolson(g, pot, dt, D, mass, laplacian)

    n_snap = n_steps // stride + 1
    out = np.empty((n_snap, g.n), dtype=complex)
    out[0] = wf0.psi
    psi = wf0.psi.copy()
    for i in range(1, n_snap):
        t = t0 + (i - 1) * stride * dt
        psi = stepper.advance(psi, t, stride)
        norm = float(np.sum(np.abs(psi) ** 2) * g.dx)
        if abs(norm - 1) > norm_tol:
            raise UnitarityError(f"norm drifted to {norm:.12g} at t={t + stride * dt:.6g}")
        m = edge_mass(np.abs(psi) ** 2, g)
        if m > edge_tol:
            raise BoxOverflowError(f"edge mass {m:.3g} at t={t + stride * dt:.6g}")
        out[i] = psi
    times = t0 + dt * stride * np.arange(n_snap)
    return Trajectory(g, times, out, dt, stride, scheme, pot, D, mass)


def energy(wf: WaveFunction, pot: Potential, t: float = 0.0, *, D: float = 0.5,
           mass: float = 1.0) -> float:
    """``<P^2>/2m + <V>`` with the kinetic term from the momentum density."""
    g = wf.grid
    hbar = 2 * mass * D
    power = np.abs(np.fft.fft(wf.psi)) ** 2
    mean_k2 = float(np.sum(g.k ** 2 * power) / np.sum(power))
    return hbar ** 2 * mean_k2 / (2 * mass) + float(np.sum(pot(g.x, t) * wf.density) * g.dx)


def hydrodynamic_energy(wf: WaveFunction, pot: Potential, t: float = 0.0, *,
                        D: float = 0.5, mass: float = 1.0, tol: float = 1e-6,
                        check: bool = True) -> float:
    """``(<v^2> + <u^2>)/2 + <V>/m``, checked against ``energy(...) / m``."""
    f = decompose(wf, D)
    g = wf.grid
    h = 0.5 * (f.mean_v2 + f.mean_u2) + float(np.sum(pot(g.x, t) * f.rho) * g.dx) / mass
    if check:
        ref = energy(wf, pot, t, D=D, mass=mass) / mass
        if abs(h - ref) > tol:
            raise IdentityViolation("hydrodynamic_energy", h - ref, tol)
    return h
