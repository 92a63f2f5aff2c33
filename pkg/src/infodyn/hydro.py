"""Madelung fields of a wavefunction and the velocity-variance identities.

With ``psi = sqrt(rho) exp(i s / 2D)`` the current velocity is ``v = s'`` and
the osmotic velocity is ``u = D (ln rho)'``. Both are computed from
``conj(psi) * psi'`` rather than from logarithms or wrapped phases:

    u = 2D Re(conj(psi) psi') / rho,    v = 2D Im(conj(psi) psi') / rho

so no phase unwrapping and no derivative of a non-periodic ``ln rho`` is
needed. Density-weighted products (``rho u**2`` and friends) are kept as
separate arrays because they stay bounded at nodes where ``u`` itself
diverges.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _density
from .errors import IdentityViolation
from .grid import Grid1D, WaveFunction, spectral_derivative

__all__ = [
    "HydroFields",
    "VelocityVariances",
    "FisherIdentities",
    "decompose",
    "velocity_variances",
    "fisher_identities",
    "unwrap_phase",
    "quantum_potential_amplitude_form",
    "continuity_rhs",
    "fokker_planck_rhs",
]


@dataclass(frozen=True, eq=False)
class HydroFields:
    """Density, velocities, quantum potential and (for nodeless states) phase.

    ``rho_u2``, ``rho_v2``, ``rho_uv`` and ``rho_q`` are the density-weighted
    integrands, finite everywhere; use :meth:`mean` on them or
    :meth:`expect` on plain fields.
    """

    grid: Grid1D
    D: float
    rho: np.ndarray = field(repr=False)
    u: np.ndarray = field(repr=False)
    v: np.ndarray = field(repr=False)
    q_pot: np.ndarray = field(repr=False)
    b_drift: np.ndarray = field(repr=False)
    s_phase: Optional[np.ndarray] = field(repr=False)
    rho_u2: np.ndarray = field(repr=False)
    rho_v2: np.ndarray = field(repr=False)
    rho_uv: np.ndarray = field(repr=False)
    rho_du: np.ndarray = field(repr=False)
    rho_q: np.ndarray = field(repr=False)
    flux: np.ndarray = field(repr=False)
    uv_mean: float = field(default=float("nan"), repr=False)

    @property
    def nodeless(self) -> bool:
        return self.s_phase is not None

    def mean(self, weighted) -> float:
        """Integral of an already density-weighted integrand."""
        return float(np.sum(weighted) * self.grid.dx)

    def expect(self, f) -> float:
        """``<f>`` under ``rho``; NaN entries of ``f`` are skipped."""
        f = np.asarray(f, dtype=float)
        ok = np.isfinite(f)
        return float(np.sum(self.rho[ok] * f[ok]) * self.grid.dx)

    @property
    def mean_u2(self) -> float:
        return self.mean(self.rho_u2)

    @property
    def mean_v2(self) -> float:
        return self.mean(self.rho_v2)

    @property
    def mean_v(self) -> float:
        return self.mean(self.flux)

    @property
    def mean_u(self) -> float:
        return self.expect(self.u)

    @property
    def mean_uv(self) -> float:
        """``<u v>``, integrated by parts as ``-D int ln(rho) (rho v)' dx``.

        Near a node crossing ``rho u v`` is a spike narrower than the grid
        spacing, while the current ``rho v`` stays smooth and ``ln rho`` is
        only logarithmically singular. ``mean(rho_uv)`` is the pointwise
        alternative.
        """
        return self.uv_mean

    @property
    def mean_q(self) -> float:
        return self.mean(self.rho_q)

    @property
    def mean_div_u(self) -> float:
        return self.mean(self.rho_du)

    @property
    def mean_s(self) -> float:
        if self.s_phase is None:
            raise ValueError("phase is undefined for a state with nodes")
        return self.expect(self.s_phase)


def unwrap_phase(psi, rho, threshold=_density.NODE_THRESHOLD, max_step=np.pi / 4):
    """Continuous ``arg psi`` over the support of ``rho``, or None if nodal.

    The support is ``rho > threshold * max(rho)``. A state counts as nodeless
    when that set is one contiguous run of grid points and the phase changes
    by at most ``max_step`` between neighbours; a larger step means a node
    (or near-node) narrower than the grid spacing. The phase is unwrapped
    from the leftmost support point and set to NaN outside the support.
    """
    above = np.flatnonzero(rho > threshold * rho.max())
    lo, hi = above[0], above[-1]
    if hi - lo + 1 != above.size:
        return None
    steps = np.angle(psi[lo + 1:hi + 1] * np.conj(psi[lo:hi]))
    if steps.size and np.max(np.abs(steps)) > max_step:
        return None
    theta = np.full(rho.shape, np.nan)
    theta[lo] = np.angle(psi[lo])
    theta[lo + 1:hi + 1] = theta[lo] + np.cumsum(steps)
    return theta


def decompose(wf: WaveFunction, D: float = 0.5) -> HydroFields:
    """Madelung decomposition of ``wf`` for diffusion constant ``D = hbar / 2m``."""
    if not D > 0:
        raise ValueError("D must be positive")
    g = wf.grid
    psi = wf.psi
    rho = np.abs(psi) ** 2
    dpsi = spectral_derivative(psi, g, 1)
    d2psi = spectral_derivative(psi, g, 2)
    cross = np.conj(psi) * dpsi
    re, im = cross.real, cross.imag
    grad2 = np.abs(dpsi) ** 2

    keep = rho > _density.GRADIENT_FLOOR * rho.max()
    safe = np.where(keep, rho, 1.0)
    u = np.where(keep, 2 * D * re / safe, 0.0)
    v = np.where(keep, 2 * D * im / safe, 0.0)

    # at a zero of psi all of |psi'|^2 is osmotic and the cross terms vanish
    rho_u2 = 4 * D * D * np.where(keep, re ** 2 / safe, grad2)
    rho_v2 = 4 * D * D * np.where(keep, im ** 2 / safe, 0.0)
    rho_uv = 4 * D * D * np.where(keep, re * im / safe, 0.0)
    d2rho = 2 * (np.conj(psi) * d2psi).real + 2 * grad2
    rho_du = D * (d2rho - 4 * np.where(keep, re ** 2 / safe, grad2))
    rho_q = 0.5 * rho_u2 + D * rho_du
    div_u = np.where(keep, rho_du / safe, 0.0)
    q_pot = np.where(keep, 0.5 * u ** 2 + D * div_u, 0.0)

    flux = 2 * D * im
    log_rho = np.log(np.maximum(rho, _density.DENSITY_FLOOR * rho.max()))
    uv_mean = -D * float(np.sum(log_rho * spectral_derivative(flux, g, 1)) * g.dx)

    theta = unwrap_phase(psi, rho)
    s_phase = None if theta is None else 2 * D * theta
    return HydroFields(
        grid=g, D=D, rho=rho, u=u, v=v, q_pot=q_pot, b_drift=u + v,
        s_phase=s_phase, rho_u2=rho_u2, rho_v2=rho_v2, rho_uv=rho_uv,
        rho_du=rho_du, rho_q=rho_q, flux=flux, uv_mean=uv_mean,
    )


def quantum_potential_amplitude_form(wf: WaveFunction, D: float = 0.5) -> np.ndarray:
    """``2 D**2 (sqrt rho)'' / sqrt rho``; only meaningful where rho is not tiny."""
    amp = np.abs(wf.psi)
    lap = spectral_derivative(amp, wf.grid, 2)
    keep = amp ** 2 > _density.GRADIENT_FLOOR * amp.max() ** 2
    return np.where(keep, 2 * D * D * lap / np.where(keep, amp, 1.0), 0.0)


def continuity_rhs(fields: HydroFields) -> np.ndarray:
    """``-(v rho)'``."""
    return -spectral_derivative(fields.flux, fields.grid, 1)


def fokker_planck_rhs(fields: HydroFields) -> np.ndarray:
    """``D rho'' - (b rho)'`` with ``b = u + v``."""
    g = fields.grid
    rho_b = fields.D * spectral_derivative(fields.rho, g, 1) + fields.flux
    return fields.D * spectral_derivative(fields.rho, g, 2) - spectral_derivative(rho_b, g, 1)


@dataclass(frozen=True)
class VelocityVariances:
    var_u: float
    var_v: float
    mean_v: float

    def partition_residual(self, var_p: float, mass: float = 1.0) -> float:
        """``m**2 (var_u + var_v) - var_p``; zero for every state."""
        return mass ** 2 * (self.var_u + self.var_v) - var_p


def velocity_variances(fields: HydroFields) -> VelocityVariances:
    mean_v = fields.mean_v
    return VelocityVariances(
        var_u=fields.mean_u2,
        var_v=max(fields.mean_v2 - mean_v ** 2, 0.0),
        mean_v=mean_v,
    )


@dataclass(frozen=True)
class FisherIdentities:
    """Residuals of the Fisher-information identities (all exactly zero)."""

    fisher: float
    mean_u2: float
    mean_q: float
    mean_div_u: float
    osmotic_variance: float
    half_potential: float
    integration_by_parts: float
    momentum_deviation: float

    def as_dict(self):
        return {
            "osmotic_variance": self.osmotic_variance,
            "half_potential": self.half_potential,
            "integration_by_parts": self.integration_by_parts,
            "momentum_deviation": self.momentum_deviation,
        }

    def worst(self) -> float:
        return max(abs(r) for r in self.as_dict().values())


def fisher_identities(wf: WaveFunction, D: float = 0.5, mass: float = 1.0, *,
                      tol: float = 1e-6, check: bool = True) -> FisherIdentities:
    """Check ``D^2 F = <u^2> = -2<Q> = -D<u'>`` and ``<(P - m v)^2> = m^2 D^2 F``.

    ``F`` comes from the density alone; the other sides come from the
    velocity fields, and ``<P^2>`` from the kinetic energy ``|psi'|^2``.
    """
    from .info import fisher_information

    fields = decompose(wf, D)
    fisher = fisher_information(fields.rho, wf.grid)
    hbar = 2 * mass * D
    dpsi = spectral_derivative(wf.psi, wf.grid, 1)
    mean_p2 = hbar ** 2 * float(np.sum(np.abs(dpsi) ** 2) * wf.grid.dx)
    u2, q, du = fields.mean_u2, fields.mean_q, fields.mean_div_u
    out = FisherIdentities(
        fisher=fisher,
        mean_u2=u2,
        mean_q=q,
        mean_div_u=du,
        osmotic_variance=D * D * fisher - u2,
        half_potential=0.5 * D * D * fisher + q,
        integration_by_parts=u2 + D * du,
        momentum_deviation=(mean_p2 - mass ** 2 * fields.mean_v2) - (mass * D) ** 2 * fisher,
    )
    if check:
        for name, r in out.as_dict().items():
            if abs(r) > tol:
                raise IdentityViolation(name, r, tol)
    return out
