"""Thermodynamic bookkeeping along a trajectory.

Notation (``k_B = 1``): ``T0 = m * D * beta0``; drift ``b = u + v``;
Smoluchowski potential ``V_smol = -m beta0 (s + D ln rho)`` with mean
``U``; free energy ``F = -m beta0 <s> = U - T0 S``; work rate
``W_rate = beta0 E``; heat rate ``Q_rate = T0 * S_ext_rate``.

Per-snapshot quantities come straight from the Madelung fields. Time
derivatives of ``S``, ``U`` and ``F`` are centered finite differences over
the snapshot series, so the law residuals compare two independent routes.

``s`` is only defined for nodeless snapshots. Its absolute value is a
gauge choice; along a trajectory consecutive snapshots are aligned so that
``<s>`` is continuous in time (no ``2 pi`` jumps), and only derivatives are
physically meaningful.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import NodalStateError
from .grid import WaveFunction
from .hydro import HydroFields, decompose
from .info import shannon_entropy
from .propagate import Potential, Trajectory, energy

__all__ = [
    "ThermoParams",
    "EntropyRates",
    "entropy_rates",
    "smoluchowski_potential",
    "helmholtz",
    "work_and_heat_rates",
    "ThermoLedger",
    "law_residuals",
    "FeedbackResiduals",
    "feedback_and_speeds",
    "EntropyProductionProbe",
    "minimum_entropy_production_probe",
]


@dataclass(frozen=True)
class ThermoParams:
    D: float = 0.5
    m: float = 1.0
    beta0: float = 1.0

    def __post_init__(self):
        for name in ("D", "m", "beta0"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    @property
    def T0(self) -> float:
        return self.m * self.D * self.beta0


class EntropyRates(NamedTuple):
    S_rate: float
    S_int_rate: float
    S_ext_rate: float


def _fields(state, params: ThermoParams) -> HydroFields:
    if isinstance(state, HydroFields):
        if state.D != params.D:
            raise ValueError("fields were decomposed with a different D")
        return state
    return decompose(state, params.D)


def entropy_rates(state, params: ThermoParams = ThermoParams()) -> EntropyRates:
    """``(dS/dt, <v^2>/D, -<b v>/D)``; the first is the sum of the other two."""
    f = _fields(state, params)
    D = params.D
    s_int = f.mean_v2 / D
    s_ext = -(f.mean_uv + f.mean_v2) / D
    return EntropyRates(-f.mean_uv / D, s_int, s_ext)


def _require_phase(f: HydroFields):
    if f.s_phase is None:
        raise NodalStateError("phase is undefined: the density has a node")


def smoluchowski_potential(state, params: ThermoParams = ThermoParams()):
    """``(V_smol, U)``; ``V_smol`` is NaN outside the support of ``rho``."""
    f = _fields(state, params)
    _require_phase(f)
    with np.errstate(divide="ignore"):
        log_rho = np.log(f.rho)
    V = -params.m * params.beta0 * (f.s_phase + params.D * log_rho)
    return V, f.expect(V)


def helmholtz(state, params: ThermoParams = ThermoParams(), tol: float = 1e-6) -> float:
    """``F = U - T0 S``, cross-checked against ``-m beta0 <s>``."""
    from .errors import IdentityViolation

    f = _fields(state, params)
    _, U = smoluchowski_potential(f, params)
    F = U - params.T0 * shannon_entropy(f.rho, f.grid)
    direct = -params.m * params.beta0 * f.mean_s
    if abs(F - direct) > tol:
        raise IdentityViolation("helmholtz", F - direct, tol)
    return F


def work_and_heat_rates(wf: WaveFunction, pot: Potential,
                        params: ThermoParams = ThermoParams(), t: float = 0.0):
    """``(beta0 * E(t), T0 * S_ext_rate)``."""
    E = energy(wf, pot, t, D=params.D, mass=params.m)
    return params.beta0 * E, params.T0 * entropy_rates(wf, params).S_ext_rate


def _centered(y, h, breaks=None):
    """Centered first difference; NaN at the ends and across ``breaks``.

    ``breaks[i]`` marks a discontinuity between samples ``i-1`` and ``i``.
    """
    y = np.asarray(y, dtype=float)
    out = np.full_like(y, np.nan)
    out[1:-1] = (y[2:] - y[:-2]) / (2 * h)
    return _drop_across(out, breaks)


def _second(y, h, breaks=None):
    y = np.asarray(y, dtype=float)
    out = np.full_like(y, np.nan)
    out[1:-1] = (y[2:] - 2 * y[1:-1] + y[:-2]) / h ** 2
    return _drop_across(out, breaks)


def _drop_across(d, breaks):
    if breaks is not None:
        bad = np.zeros(d.shape, dtype=bool)
        bad[:-1] |= breaks[1:]
        bad |= breaks
        d[bad] = np.nan
    return d


def _align_gauge(s_mean, period, breaks=None):
    """Remove ``period`` jumps from a series of phase means.

    NaN entries and ``breaks`` start a new segment; each segment keeps its
    own (arbitrary) offset.
    """
    out = np.array(s_mean, dtype=float)
    prev = []
    for i, val in enumerate(out):
        if np.isnan(val) or (breaks is not None and breaks[i]):
            prev = []
        if np.isnan(val):
            continue
        if prev:
            guess = 2 * prev[-1] - prev[-2] if len(prev) > 1 else prev[-1]
            out[i] = val + period * np.round((guess - val) / period)
        prev = (prev + [out[i]])[-2:]
    return out


def _phase_slip(theta_prev, theta):
    """True if the phase change between two snapshots is not smooth in x.

    A node passing through the support shifts the phase on one side of it by
    a full period; a smooth evolution changes it by a small, slowly varying
    amount everywhere.
    """
    both = np.isfinite(theta_prev) & np.isfinite(theta)
    if not both.any():
        return True
    d = theta[both] - theta_prev[both]
    d = np.angle(np.exp(1j * (d - np.median(d))))
    return bool(np.ptp(d) > 0.5 * np.pi)


@dataclass(frozen=True, eq=False)
class ThermoLedger:
    """Time series aligned with ``times``.

    NaN marks unavailable entries: ``U``/``F`` at snapshots whose phase is
    undefined, and finite differences at the ends or across ``breaks``.
    ``breaks[i]`` is set when snapshot ``i`` cannot be joined smoothly to
    snapshot ``i-1`` (a node, or a phase slip from a node crossing between
    the two).
    """

    times: np.ndarray
    params: ThermoParams
    S: np.ndarray
    S_rate: np.ndarray
    S_int_rate: np.ndarray
    S_ext_rate: np.ndarray
    S_rate_fd: np.ndarray
    U: np.ndarray
    F: np.ndarray
    U_rate: np.ndarray
    F_rate: np.ndarray
    W_rate: np.ndarray
    Q_rate: np.ndarray
    E: np.ndarray
    mean_u2: np.ndarray
    mean_v2: np.ndarray
    mean_V: np.ndarray
    residual_entropy_rate: np.ndarray
    residual_first_law: np.ndarray
    residual_extremum: np.ndarray
    breaks: np.ndarray = field(default=None, repr=False)
    residual_feedback: np.ndarray = field(default=None)

    @property
    def dt_snapshot(self) -> float:
        return float(self.times[1] - self.times[0])

    def max_abs(self, name) -> float:
        a = getattr(self, name)
        a = a[np.isfinite(a)]
        return float(np.max(np.abs(a))) if a.size else float("nan")


def law_residuals(traj: Trajectory, pot: Potential | None = None,
                  params: ThermoParams | None = None) -> ThermoLedger:
    """Assemble the ledger for ``traj`` and the first-law/extremum residuals.

    ``residual_first_law = dU/dt - W_rate - Q_rate`` and
    ``residual_extremum = dF/dt - W_rate + T0 S_int_rate``, both with
    centered differences, so they scale as ``dt_snapshot**2``.
    """
    pot = traj.potential if pot is None else pot
    params = ThermoParams(D=traj.D, m=traj.mass) if params is None else params
    if len(traj) < 3:
        raise ValueError("need at least three snapshots")
    g = traj.grid
    mb = params.m * params.beta0
    n = len(traj)
    cols = {k: np.full(n, np.nan) for k in
            ("S", "S_rate", "S_int_rate", "S_ext_rate", "E", "mean_u2", "mean_v2",
             "mean_V", "s_mean", "log_term")}
    breaks = np.zeros(n, dtype=bool)
    prev_phase = None
    for i, wf in enumerate(traj):
        t = traj.times[i]
        f = decompose(wf, params.D)
        rates = entropy_rates(f, params)
        cols["S"][i] = shannon_entropy(f.rho, g)
        cols["S_rate"][i], cols["S_int_rate"][i], cols["S_ext_rate"][i] = rates
        cols["E"][i] = energy(wf, pot, t, D=params.D, mass=params.m)
        cols["mean_u2"][i] = f.mean_u2
        cols["mean_v2"][i] = f.mean_v2
        cols["mean_V"][i] = float(np.sum(pot(g.x, t) * f.rho) * g.dx)
        if f.nodeless:
            cols["s_mean"][i] = f.mean_s
            support = np.isfinite(f.s_phase)
            cols["log_term"][i] = params.D * float(
                np.sum(f.rho[support] * np.log(f.rho[support])) * g.dx)
            phase = f.s_phase / (2 * params.D)
            if prev_phase is not None and _phase_slip(prev_phase, phase):
                breaks[i] = True
            prev_phase = phase
        else:
            breaks[i] = True
            prev_phase = None
    # an unavailable snapshot also breaks the stencil that follows it
    breaks[1:] |= ~np.isfinite(cols["s_mean"][:-1])

    # s = 2D arg(psi), so the gauge ambiguity is 4 pi D
    s_mean = _align_gauge(cols["s_mean"], 4 * np.pi * params.D, breaks)
    F = -mb * s_mean
    U = -mb * (s_mean + cols["log_term"])
    h = traj.dt_snapshot
    W = params.beta0 * cols["E"]
    Q = params.T0 * cols["S_ext_rate"]
    # S depends on rho alone and stays smooth through node crossings
    S_fd = _centered(cols["S"], h)
    U_rate = _centered(U, h, breaks)
    F_rate = _centered(F, h, breaks)
    ledger = ThermoLedger(
        times=np.asarray(traj.times, dtype=float), params=params,
        S=cols["S"], S_rate=cols["S_rate"], S_int_rate=cols["S_int_rate"],
        S_ext_rate=cols["S_ext_rate"], S_rate_fd=S_fd, U=U, F=F,
        U_rate=U_rate, F_rate=F_rate, W_rate=W, Q_rate=Q, E=cols["E"],
        mean_u2=cols["mean_u2"], mean_v2=cols["mean_v2"], mean_V=cols["mean_V"],
        residual_entropy_rate=S_fd - cols["S_rate"],
        residual_first_law=U_rate - W - Q,
        residual_extremum=F_rate - W + params.T0 * cols["S_int_rate"],
        breaks=breaks,
    )
    if n >= 5:
        fb = feedback_and_speeds(ledger)
        object.__setattr__(ledger, "residual_feedback", fb.residual_feedback)
    else:
        object.__setattr__(ledger, "residual_feedback", np.full(n, np.nan))
    return ledger


@dataclass(frozen=True, eq=False)
class FeedbackResiduals:
    """Second-derivative ("speed") relations.

    ``F_accel`` is ``d/dt dF/dt`` from second differences of ``F``;
    ``entropy_speed`` is ``T0 d/dt S_int_rate``; ``work_speed`` is
    ``d/dt W_rate``, zero for static potentials.

    ``residual_feedback = F_accel + entropy_speed - work_speed``. For a static
    potential this is the plain negative-feedback relation; the work term
    keeps it exact when the potential is driven.
    ``residual_speed_free_energy`` compares ``F_accel`` with
    ``beta0 d/dt(m <u^2> + 2 <V>) - work_speed`` and
    ``residual_speed_entropy`` compares ``entropy_speed`` with
    ``m beta0 d/dt <v^2>``.
    """

    times: np.ndarray
    F_accel: np.ndarray
    entropy_speed: np.ndarray
    work_speed: np.ndarray
    residual_feedback: np.ndarray
    residual_speed_free_energy: np.ndarray
    residual_speed_entropy: np.ndarray

    @property
    def residual_feedback_static(self) -> np.ndarray:
        """``F_accel + entropy_speed`` without the drive correction."""
        return self.F_accel + self.entropy_speed

    def max_abs(self, name) -> float:
        a = getattr(self, name)
        a = a[np.isfinite(a)]
        return float(np.max(np.abs(a))) if a.size else float("nan")


def feedback_and_speeds(ledger: ThermoLedger, params: ThermoParams | None = None
                        ) -> FeedbackResiduals:
    params = ledger.params if params is None else params
    if len(ledger.times) < 5:
        raise ValueError("need at least five snapshots")
    h = ledger.dt_snapshot
    br = ledger.breaks
    F_accel = _second(ledger.F, h, br)
    entropy_speed = params.T0 * _centered(ledger.S_int_rate, h, br)
    work_speed = _centered(ledger.W_rate, h, br)
    drive = params.beta0 * _centered(params.m * ledger.mean_u2 + 2 * ledger.mean_V, h, br)
    v2_speed = params.m * params.beta0 * _centered(ledger.mean_v2, h, br)
    return FeedbackResiduals(
        times=ledger.times,
        F_accel=F_accel,
        entropy_speed=entropy_speed,
        work_speed=work_speed,
        residual_feedback=F_accel + entropy_speed - work_speed,
        residual_speed_free_energy=F_accel - (drive - work_speed),
        residual_speed_entropy=entropy_speed - v2_speed,
    )


@dataclass(frozen=True)
class EntropyProductionProbe:
    """Sign pattern of ``d/dt S_int_rate``; informational only."""

    classification: str
    n_sign_changes: int
    fraction_decreasing: float
    fraction_increasing: float


def minimum_entropy_production_probe(ledger: ThermoLedger, tol: float = 1e-9
                                     ) -> EntropyProductionProbe:
    """Classify the entropy production as ``"identically zero"``,
    ``"monotone-decreasing"``, ``"oscillatory"`` or ``"other"``.

    Derivative samples with magnitude at most ``tol`` count as zero. Two or
    more sign changes make the series oscillatory.
    """
    rate = ledger.S_int_rate[np.isfinite(ledger.S_int_rate)]
    d = _centered(ledger.S_int_rate, ledger.dt_snapshot)
    d = d[np.isfinite(d)]
    signs = np.sign(d[np.abs(d) > tol])
    if np.all(np.abs(rate) <= tol) and signs.size == 0:
        return EntropyProductionProbe("identically zero", 0, 0.0, 0.0)
    changes = int(np.count_nonzero(signs[1:] != signs[:-1])) if signs.size else 0
    dec = float(np.mean(d < -tol)) if d.size else 0.0
    inc = float(np.mean(d > tol)) if d.size else 0.0
    if signs.size and np.all(signs < 0):
        label = "monotone-decreasing"
    elif changes >= 2:
        label = "oscillatory"
    else:
        label = "other"
    return EntropyProductionProbe(label, changes, dec, inc)
