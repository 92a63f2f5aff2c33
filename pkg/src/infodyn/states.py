"""Closed-form states: Gaussian packets, oscillator eigenstates, coherent
states and exact free-evolution time slices.

They serve both as initial conditions and as independent ground truth for
the functionals. Throughout, ``hbar = 2 * mass * D``; with the defaults
``D = 1/2`` and ``mass = 1`` this is ``hbar = 1``. The ``p0`` arguments are
wavenumbers (phase ``exp(i p0 x)``), which coincide with momenta when
``hbar = 1``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BoxOverflowError, ResolutionError
from .grid import EDGE_TOL, Grid1D, WaveFunction, edge_mass

__all__ = [
    "StateSpec",
    "gaussian_packet",
    "ho_eigenstate",
    "hermite_functions",
    "coherent_state",
    "free_gaussian_at",
    "superposition",
    "build_state",
    "random_ho_superposition",
]

KINDS = ("gaussian", "ho_eigenstate", "coherent", "free_gaussian_at", "superposition")

_PARAMS = {
    "gaussian": {"x0": 0.0, "p0": 0.0, "var0": 0.5},
    "ho_eigenstate": {"n": 0, "omega": 1.0},
    "coherent": {"alpha_re": 0.0, "alpha_im": 0.0, "omega": 1.0},
    "free_gaussian_at": {"t": 0.0, "x0": 0.0, "p0": 0.0, "var0": 0.5},
    "superposition": {},
}


@dataclass(frozen=True)
class StateSpec:
    """Declarative description of an initial state.

    ``params`` holds the kind-specific scalars (see ``_PARAMS`` for names
    and defaults). Superpositions carry their parts in ``components`` and
    complex weights in ``coeffs``.
    """

    kind: str
    params: dict = field(default_factory=dict)
    components: tuple = ()
    coeffs: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown state kind {self.kind!r}; expected one of {KINDS}")
        unknown = set(self.params) - set(_PARAMS[self.kind])
        if unknown:
            raise ValueError(f"unknown parameters for {self.kind}: {sorted(unknown)}")
        p = self.resolved()
        if "var0" in p and not p["var0"] > 0:
            raise ValueError("var0 must be positive")
        if "omega" in p and not p["omega"] > 0:
            raise ValueError("omega must be positive")
        if self.kind == "ho_eigenstate":
            n = p["n"]
            if int(n) != n or n < 0:
                raise ValueError(f"eigenstate index must be a non-negative integer, got {n}")
        if self.kind == "superposition":
            if not self.components:
                raise ValueError("superposition needs at least one component")
            if len(self.coeffs) != len(self.components):
                raise ValueError("one coefficient per component is required")
            total = sum(abs(c) ** 2 for c in self.coeffs)
            if abs(total - 1) > 1e-10:
                raise ValueError(f"superposition weights sum to {total}, not 1")

    def resolved(self) -> dict:
        return {**_PARAMS[self.kind], **self.params}


def _finish(grid: Grid1D, values, edge_tol=EDGE_TOL) -> WaveFunction:
    wf = WaveFunction.from_samples(grid, values)
    m = edge_mass(wf.density, grid)
    if m > edge_tol:
        raise BoxOverflowError(f"state has edge mass {m:.3g} > {edge_tol:g}")
    return wf


def gaussian_packet(x0, p0, var0, grid: Grid1D) -> WaveFunction:
    """``(2 pi var0)^(-1/4) exp(-(x-x0)^2 / (4 var0) + i p0 x)``."""
    if not var0 > 0:
        raise ValueError("var0 must be positive")
    x = grid.x
    psi = (2 * np.pi * var0) ** -0.25 * np.exp(-((x - x0) ** 2) / (4 * var0) + 1j * p0 * x)
    return _finish(grid, psi)


def hermite_functions(nmax: int, xi) -> np.ndarray:
    """Normalized Hermite functions ``h_0 .. h_nmax`` in the scaled variable ``xi``.

    Uses the three-term recurrence on the normalized functions, which stays
    finite for large orders where raw Hermite polynomials overflow.
    Normalization is with respect to ``d xi``.
    """
    xi = np.asarray(xi, dtype=float)
    out = np.empty((nmax + 1,) + xi.shape)
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * xi ** 2)
    if nmax >= 1:
        out[1] = np.sqrt(2.0) * xi * out[0]
    for k in range(1, nmax):
        out[k + 1] = np.sqrt(2.0 / (k + 1)) * xi * out[k] - np.sqrt(k / (k + 1)) * out[k - 1]
    return out


def _check_resolved(wf: WaveFunction, what: str, tol=1e-12):
    # spectral weight in the top fifth of the band must be negligible
    k = np.abs(wf.grid.k)
    phi2 = np.abs(np.fft.fft(wf.psi)) ** 2
    hi = phi2[k > 0.8 * k.max()].sum() / phi2.sum()
    if hi > tol:
        raise ResolutionError(f"{what} is under-resolved (high-band weight {hi:.2g})")


def ho_eigenstate(n: int, omega: float, grid: Grid1D, *, D=0.5, mass=1.0) -> WaveFunction:
    """Eigenstate ``n`` of ``V(x) = mass * omega**2 * x**2 / 2``; energy ``hbar*omega*(n+1/2)``."""
    if int(n) != n or n < 0:
        raise ValueError(f"eigenstate index must be a non-negative integer, got {n}")
    if not omega > 0:
        raise ValueError("omega must be positive")
    n = int(n)
    hbar = 2 * mass * D
    scale = np.sqrt(mass * omega / hbar)
    psi = hermite_functions(n, scale * grid.x)[n] * np.sqrt(scale)
    wf = _finish(grid, psi)
    _check_resolved(wf, f"eigenstate n={n}")
    return wf


def coherent_state(alpha: complex, omega: float, grid: Grid1D, *, D=0.5, mass=1.0) -> WaveFunction:
    """Displaced oscillator ground state.

    ``<X> = sqrt(2 hbar / (mass omega)) Re(alpha)`` and
    ``<P> = sqrt(2 mass hbar omega) Im(alpha)``.
    """
    if not omega > 0:
        raise ValueError("omega must be positive")
    alpha = complex(alpha)
    hbar = 2 * mass * D
    x0 = np.sqrt(2 * hbar / (mass * omega)) * alpha.real
    k0 = np.sqrt(2 * mass * omega / hbar) * alpha.imag
    var0 = hbar / (2 * mass * omega)
    x = grid.x
    psi = (2 * np.pi * var0) ** -0.25 * np.exp(-((x - x0) ** 2) / (4 * var0) + 1j * k0 * x)
    return _finish(grid, psi)


def free_gaussian_at(t, x0, p0, var0, grid: Grid1D, *, D=0.5) -> WaveFunction:
    """Exact free evolution of :func:`gaussian_packet` to time ``t``.

    Position variance grows as ``var0 + (D t)**2 / var0``.
    """
    if not var0 > 0:
        raise ValueError("var0 must be positive")
    a = var0 + 1j * D * t
    y = grid.x - x0 - 2 * D * p0 * t
    psi = ((2 * np.pi * var0) ** -0.25 * np.sqrt(var0 / a)
           * np.exp(-(y ** 2) / (4 * a) + 1j * p0 * grid.x - 1j * D * p0 ** 2 * t))
    return _finish(grid, psi)


def superposition(specs, coeffs, grid: Grid1D, *, D=0.5, mass=1.0) -> WaveFunction:
    """Normalized linear combination of the states described by ``specs``."""
    specs = list(specs)
    coeffs = np.asarray(coeffs, dtype=complex)
    if not specs:
        raise ValueError("superposition needs at least one component")
    if len(coeffs) != len(specs):
        raise ValueError("one coefficient per component is required")
    total = np.zeros(grid.n, dtype=complex)
    for c, spec in zip(coeffs, specs):
        total += c * build_state(spec, grid, D=D, mass=mass).psi
    if not np.sum(np.abs(total) ** 2) * grid.dx > 1e-24:
        raise ValueError("superposition vanishes identically")
    return _finish(grid, total)


def build_state(spec: StateSpec, grid: Grid1D, *, D=0.5, mass=1.0) -> WaveFunction:
    p = spec.resolved()
    if spec.kind == "gaussian":
        return gaussian_packet(p["x0"], p["p0"], p["var0"], grid)
    if spec.kind == "ho_eigenstate":
        return ho_eigenstate(int(p["n"]), p["omega"], grid, D=D, mass=mass)
    if spec.kind == "coherent":
        return coherent_state(complex(p["alpha_re"], p["alpha_im"]), p["omega"], grid,
                              D=D, mass=mass)
    if spec.kind == "free_gaussian_at":
        return free_gaussian_at(p["t"], p["x0"], p["p0"], p["var0"], grid, D=D)
    return superposition(spec.components, spec.coeffs, grid, D=D, mass=mass)


def random_ho_superposition(rng: np.random.Generator, grid: Grid1D, n_terms=5, n_max=10,
                            omega=1.0, *, D=0.5, mass=1.0) -> WaveFunction:
    """Random complex combination of ``n_terms`` distinct oscillator eigenstates."""
    levels = np.sort(rng.choice(n_max + 1, size=n_terms, replace=False))
    c = rng.normal(size=n_terms) + 1j * rng.normal(size=n_terms)
    c /= np.linalg.norm(c)
    hbar = 2 * mass * D
    scale = np.sqrt(mass * omega / hbar)
    h = hermite_functions(int(levels[-1]), scale * grid.x) * np.sqrt(scale)
    return _finish(grid, c @ h[levels])
