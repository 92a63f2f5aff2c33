"""Shannon entropies, Fisher information, moments and the inequality audit.

All quantities are dimensionless with ``hbar = 1``: momenta are wavenumbers
on ``grid.k`` and ``P = -i d/dx``. Entropies are in nats.

Every inequality audited by :func:`audit_inequalities` is a theorem, so a
negative slack beyond ``tol_slack`` is treated as a numerical failure.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import _density
from .errors import InequalityViolation
from .grid import Grid1D, WaveFunction, spectral_derivative, to_momentum
from .hydro import decompose

__all__ = [
    "shannon_entropy",
    "fisher_information",
    "momentum_entropy",
    "Moments",
    "moments",
    "operator_momentum_moments",
    "classical_momentum_variance",
    "InfoReport",
    "audit_inequalities",
    "ENTROPIC_BOUND",
    "TOL_SLACK",
]

ENTROPIC_BOUND = 1 + np.log(np.pi)
TOL_SLACK = 1e-7
TWO_PI_E = 2 * np.pi * np.e


def shannon_entropy(density, grid: Grid1D, space: str = "position") -> float:
    """Differential entropy ``-int rho ln rho``.

    ``space="momentum"`` treats ``density`` as samples on ``grid.k``.
    """
    rho = _density.check_density(density, grid, space)
    h = grid.dx if space == "position" else grid.dk
    return float(np.sum(_density.entropy_integrand(rho)) * h)


def momentum_entropy(wf: WaveFunction, oversample: int = 8) -> float:
    """Shannon entropy of ``|phi(k)|^2`` sampled ``oversample`` times finer than ``grid.k``.

    Zero-padding ``psi`` past the box samples the same continuous transform
    on a denser k-lattice. This matters for states with momentum-space
    nodes, where ``rho ln rho`` is not smooth and the plain rectangle rule
    on the coarse ``grid.k`` converges only as ``dk**3``.
    """
    g = wf.grid
    if int(oversample) != oversample or oversample < 1:
        raise ValueError("oversample must be a positive integer")
    n = g.n * int(oversample)
    padded = np.zeros(n, dtype=complex)
    padded[:g.n] = wf.psi
    dk = 2 * np.pi / (n * g.dx)
    # the phase factor exp(-i k x_min) drops out of |phi|^2
    rho_p = np.abs(np.fft.fft(padded)) ** 2 * g.dx ** 2 / (2 * np.pi)
    return float(np.sum(_density.entropy_integrand(rho_p)) * dk)


def fisher_information(density, grid: Grid1D) -> float:
    """``int (rho')**2 / rho dx`` with a spectral ``rho'``."""
    rho = _density.check_density(density, grid)
    return float(np.sum(_density.score_squared_integrand(rho, grid)) * grid.dx)


class Moments(NamedTuple):
    mean_x: float
    var_x: float
    mean_p: float
    var_p: float


def moments(wf: WaveFunction) -> Moments:
    """Position moments against ``|psi|^2``, momentum moments against ``|F psi|^2``."""
    g = wf.grid
    rho = wf.density
    mx = float(np.sum(g.x * rho) * g.dx)
    vx = float(np.sum((g.x - mx) ** 2 * rho) * g.dx)
    rho_p = to_momentum(wf).density
    mp = float(np.sum(g.k * rho_p) * g.dk)
    vp = float(np.sum((g.k - mp) ** 2 * rho_p) * g.dk)
    return Moments(mx, vx, mp, vp)


def operator_momentum_moments(wf: WaveFunction):
    """``(<P>, <P^2> - <P>^2)`` from ``P = -i d/dx`` in position space."""
    g = wf.grid
    dpsi = spectral_derivative(wf.psi, g, 1)
    mp = float(np.real(np.sum(np.conj(wf.psi) * (-1j) * dpsi)) * g.dx)
    p2 = float(np.sum(np.abs(dpsi) ** 2) * g.dx)
    return mp, p2 - mp ** 2


def classical_momentum_variance(wf: WaveFunction) -> float:
    """Variance of ``p_cl = (arg psi)'`` under ``rho``, from the current velocity."""
    f = decompose(wf, D=0.5)
    return max(f.mean_v2 - f.mean_v ** 2, 0.0)


@dataclass(frozen=True)
class InfoReport:
    """Information functionals of one state plus signed inequality slacks.

    Every slack is (left side) - (right side) and is non-negative when the
    inequality holds. ``fisher_identity_residual`` is
    ``4 (var_p - var_p_cl) - fisher``, which vanishes identically.
    """

    S_q: float
    S_p: float
    fisher: float
    mean_x: float
    var_x: float
    mean_p: float
    var_p: float
    var_p_cl: float
    entropy_power_product: float
    fisher_identity_residual: float
    slacks: dict = field(default_factory=dict)

    @property
    def entropy_sum(self) -> float:
        return self.S_q + self.S_p

    def violations(self, tol: float = TOL_SLACK):
        return {k: s for k, s in self.slacks.items() if s < -tol}


def _slacks(S_q, S_p, fisher, var_x, var_p, var_p_cl):
    ep_sum = np.exp(S_q + S_p) / TWO_PI_E
    stam_mid = TWO_PI_E * np.exp(-2 * S_q)
    mom_power = 2 / (np.e * np.pi) * np.exp(2 * S_p)
    return {
        # entropic uncertainty
        "entropic_uncertainty": S_q + S_p - ENTROPIC_BOUND,
        # dX dP >= entropy power product >= 1/2
        "entropy_power_product": np.sqrt(var_x * var_p) - ep_sum,
        "entropy_power_floor": ep_sum - 0.5,
        "heisenberg": np.sqrt(var_x * var_p) - 0.5,
        # Gaussian maximizes entropy at fixed variance
        "gaussian_max_position": 0.5 * np.log(TWO_PI_E * var_x) - S_q,
        "gaussian_max_momentum": 0.5 * np.log(TWO_PI_E * var_p) - S_p,
        # Stam chain F >= 2 pi e exp(-2 S_q) >= 1 / var_x
        "stam_fisher": fisher - stam_mid,
        "stam_variance": stam_mid - 1 / var_x,
        # momentum-side chain combined with the entropic bound
        "momentum_entropy_power": 4 * var_p - mom_power,
        "entropic_crossing": mom_power - stam_mid,
        # 4 var_p >= 4 (var_p - var_p_cl) = F
        "classical_momentum": 4 * var_p_cl,
        "fisher_momentum_bound": 4 * var_p - fisher,
    }


def audit_inequalities(wf: WaveFunction, tol_slack: float = TOL_SLACK,
                       check: bool = True) -> InfoReport:
    """Compute all information functionals of ``wf`` and audit the bounds.

    With ``check=True`` the first slack below ``-tol_slack`` raises
    :class:`InequalityViolation`.
    """
    g = wf.grid
    rho = wf.density
    S_q = shannon_entropy(rho, g)
    S_p = momentum_entropy(wf)
    fisher = fisher_information(rho, g)
    m = moments(wf)
    var_p_cl = classical_momentum_variance(wf)
    report = InfoReport(
        S_q=S_q, S_p=S_p, fisher=fisher,
        mean_x=m.mean_x, var_x=m.var_x, mean_p=m.mean_p, var_p=m.var_p,
        var_p_cl=var_p_cl,
        entropy_power_product=float(np.exp(S_q + S_p) / TWO_PI_E),
        fisher_identity_residual=4 * (m.var_p - var_p_cl) - fisher,
        slacks={k: float(v) for k, v in
                _slacks(S_q, S_p, fisher, m.var_x, m.var_p, var_p_cl).items()},
    )
    if check:
        for name, s in report.slacks.items():
            if s < -tol_slack:
                raise InequalityViolation(name, s, tol_slack)
    return report
