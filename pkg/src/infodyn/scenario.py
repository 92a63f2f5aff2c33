"""Scenario configs and the per-snapshot analysis table behind ``infodyn run``.

A scenario is a TOML document with the sections ``grid``, ``units``,
``initial_state``, ``potential``, ``evolution``, ``outputs`` and
``tolerances``. Unknown sections or keys are errors. Superpositions list
their parts as ``[[initial_state.components]]`` tables and their weights as
``initial_state.coeffs``, each weight either a number or a ``[re, im]`` pair.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import InfodynError
from .grid import Grid1D, make_grid
from .hydro import decompose, fisher_identities, velocity_variances
from .info import audit_inequalities
from .propagate import SCHEMES, Potential, Trajectory, evolve, hydrodynamic_energy
from .states import StateSpec, build_state
from .thermo import (ThermoLedger, ThermoParams, feedback_and_speeds, law_residuals,
                     minimum_entropy_production_probe)

__all__ = [
    "ConfigError",
    "ScenarioConfig",
    "parse_config",
    "load_config",
    "BUILTIN_SCENARIOS",
    "builtin_config",
    "RunResult",
    "prepare",
    "run_scenario",
    "CSV_COLUMNS",
    "FIELD_COLUMNS",
]

CSV_COLUMNS = (
    "t", "E", "S_q", "S_p", "fisher", "var_x", "var_p", "var_u", "var_v",
    "S_rate", "S_int_rate", "S_ext_rate", "U", "F", "W_rate", "Q_rate",
    "res_first_law", "res_extremum", "res_feedback",
    "slack_eq3", "slack_eq7a", "slack_eq7b", "slack_eq26",
)
FIELD_COLUMNS = ("t", "x", "rho", "u", "v", "Q")

# CSV slack columns and the audit entries they come from
_SLACK_COLUMNS = {
    "slack_eq3": "entropic_uncertainty",
    "slack_eq7a": "stam_fisher",
    "slack_eq7b": "stam_variance",
    "slack_eq26": "fisher_momentum_bound",
}


class ConfigError(InfodynError, ValueError):
    """Malformed or out-of-range scenario configuration."""


_SECTIONS = {
    "grid": {"x_min": -20.0, "x_max": 20.0, "n": 2048},
    "units": {"D": 0.5, "m": 1.0, "beta0": 1.0},
    "potential": {"kind": None, "omega": 1.0, "amplitude": 0.0, "frequency": 0.0,
                  "values": None},
    "evolution": {"dt": 1e-3, "t_final": None, "snapshot_stride": 10,
                  "scheme": "split_step"},
    "outputs": {"csv_path": None, "fields_dump": False, "precision": 12},
    "tolerances": {"tol_slack": 1e-7, "tol_rate": 1e-3, "tol_rate2": 1e-2},
}
_REQUIRED = ("initial_state", "potential", "evolution")


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    grid: dict
    units: dict
    initial_state: StateSpec
    potential: dict
    evolution: dict
    outputs: dict
    tolerances: dict = field(default_factory=dict)

    def make_grid(self) -> Grid1D:
        g = self.grid
        return make_grid(g["x_min"], g["x_max"], g["n"])

    def make_potential(self, grid: Grid1D) -> Potential:
        p, m = self.potential, self.units["m"]
        kind = p["kind"]
        if kind == "free":
            return Potential.free()
        if kind == "harmonic":
            return Potential.harmonic(p["omega"], m)
        if kind == "time_dependent_harmonic":
            return Potential.driven_harmonic(p["omega"], p["amplitude"], p["frequency"], m)
        vals = np.asarray(p["values"], dtype=float)
        if vals.shape != (grid.n,):
            raise ConfigError(f"tabulated potential needs {grid.n} values, got {vals.size}")
        return Potential.tabulated(vals)

    @property
    def params(self) -> ThermoParams:
        u = self.units
        return ThermoParams(D=u["D"], m=u["m"], beta0=u["beta0"])

    @property
    def n_steps(self) -> int:
        ev = self.evolution
        return int(round(ev["t_final"] / ev["dt"]))


def _number(value, where, kind=float):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where} must be a number, got {value!r}")
    if kind is int:
        if int(value) != value:
            raise ConfigError(f"{where} must be an integer, got {value!r}")
        return int(value)
    if not np.isfinite(value):
        raise ConfigError(f"{where} must be finite")
    return float(value)


def _section(doc, name):
    raw = doc.get(name, {})
    if not isinstance(raw, dict):
        raise ConfigError(f"[{name}] must be a table")
    defaults = _SECTIONS[name]
    unknown = set(raw) - set(defaults)
    if unknown:
        raise ConfigError(f"unknown keys in [{name}]: {sorted(unknown)}")
    out = {**defaults, **raw}
    missing = [k for k, v in out.items() if v is None and k not in ("values", "csv_path")]
    if missing:
        raise ConfigError(f"missing keys in [{name}]: {missing}")
    return out


def _coeff(c, where):
    if isinstance(c, list):
        if len(c) != 2:
            raise ConfigError(f"{where} must be a number or a [re, im] pair")
        return complex(_number(c[0], where), _number(c[1], where))
    return complex(_number(c, where))


def _state(raw, where="initial_state") -> StateSpec:
    if not isinstance(raw, dict):
        raise ConfigError(f"[{where}] must be a table")
    raw = dict(raw)
    kind = raw.pop("kind", None)
    if kind is None:
        raise ConfigError(f"[{where}] needs a 'kind'")
    comps = raw.pop("components", [])
    coeffs = raw.pop("coeffs", [])
    if kind != "superposition" and (comps or coeffs):
        raise ConfigError(f"only superpositions take components/coeffs ({where})")
    params = {}
    for k, v in raw.items():
        params[k] = _number(v, f"{where}.{k}", int if k == "n" else float)
    try:
        return StateSpec(
            kind, params,
            tuple(_state(c, f"{where}.components[{i}]") for i, c in enumerate(comps)),
            tuple(_coeff(c, f"{where}.coeffs[{i}]") for i, c in enumerate(coeffs)),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"[{where}] {exc}") from None


def parse_config(text: str, name: str = "scenario") -> ScenarioConfig:
    """Parse and validate a scenario document. Raises :class:`ConfigError`."""
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"cannot parse config: {exc}") from None
    unknown = set(doc) - set(_SECTIONS) - {"initial_state"}
    if unknown:
        raise ConfigError(f"unknown sections: {sorted(unknown)}")
    for s in _REQUIRED:
        if s not in doc:
            raise ConfigError(f"missing section [{s}]")

    grid = _section(doc, "grid")
    grid = {"x_min": _number(grid["x_min"], "grid.x_min"),
            "x_max": _number(grid["x_max"], "grid.x_max"),
            "n": _number(grid["n"], "grid.n", int)}
    units = {k: _number(v, f"units.{k}") for k, v in _section(doc, "units").items()}
    for k, v in units.items():
        if not v > 0:
            raise ConfigError(f"units.{k} must be positive")

    pot = _section(doc, "potential")
    kinds = ("free", "harmonic", "time_dependent_harmonic", "tabulated")
    if pot["kind"] not in kinds:
        raise ConfigError(f"potential.kind must be one of {kinds}, got {pot['kind']!r}")
    for k in ("omega", "amplitude", "frequency"):
        pot[k] = _number(pot[k], f"potential.{k}")
    if pot["kind"] in ("harmonic", "time_dependent_harmonic") and not pot["omega"] > 0:
        raise ConfigError("potential.omega must be positive")
    if (pot["kind"] == "tabulated") != (pot["values"] is not None):
        raise ConfigError("potential.values is required for, and only for, kind = 'tabulated'")

    ev = _section(doc, "evolution")
    ev = {"dt": _number(ev["dt"], "evolution.dt"),
          "t_final": _number(ev["t_final"], "evolution.t_final"),
          "snapshot_stride": _number(ev["snapshot_stride"], "evolution.snapshot_stride", int),
          "scheme": ev["scheme"]}
    if ev["scheme"] not in SCHEMES:
        raise ConfigError(f"evolution.scheme must be one of {SCHEMES}")
    if not (ev["dt"] > 0 and ev["t_final"] > 0 and ev["snapshot_stride"] >= 1):
        raise ConfigError("need dt > 0, t_final > 0 and snapshot_stride >= 1")
    n_steps = round(ev["t_final"] / ev["dt"])
    if abs(n_steps * ev["dt"] - ev["t_final"]) > 1e-9 * ev["t_final"]:
        raise ConfigError("t_final must be a whole number of steps dt")
    if n_steps % ev["snapshot_stride"]:
        raise ConfigError("the number of steps must be a multiple of snapshot_stride")
    if n_steps // ev["snapshot_stride"] < 4:
        raise ConfigError("need at least five snapshots")

    out = _section(doc, "outputs")
    if out["csv_path"] is not None and not isinstance(out["csv_path"], str):
        raise ConfigError("outputs.csv_path must be a string")
    if not isinstance(out["fields_dump"], bool):
        raise ConfigError("outputs.fields_dump must be true or false")
    out["precision"] = _number(out["precision"], "outputs.precision", int)
    if not 1 <= out["precision"] <= 17:
        raise ConfigError("outputs.precision must be between 1 and 17")
    if out["csv_path"] is None:
        out["csv_path"] = f"{name}.csv"

    tol = {k: _number(v, f"tolerances.{k}") for k, v in _section(doc, "tolerances").items()}
    return ScenarioConfig(name, grid, units, _state(doc["initial_state"]), pot, ev, out, tol)


def load_config(path) -> ScenarioConfig:
    """Read a config file, or a built-in scenario when ``path`` names one."""
    path = str(path)
    if path in BUILTIN_SCENARIOS:
        return builtin_config(path)
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text, p.stem)


_HO = """
[potential]
kind = "harmonic"
omega = 1.0
"""

BUILTIN_SCENARIOS = {
    "stationary_ground": """
[initial_state]
kind = "ho_eigenstate"
n = 0
omega = 1.0
""" + _HO + """
[evolution]
dt = 2.5e-4
t_final = 2.0
snapshot_stride = 40
""",
    "coherent_oscillation": """
[initial_state]
kind = "coherent"
alpha_re = 1.0
alpha_im = 0.0
omega = 1.0
""" + _HO + """
[evolution]
dt = 1e-3
t_final = 10.0
snapshot_stride = 10
""",
    "free_spreading": """
[initial_state]
kind = "gaussian"
x0 = 0.0
p0 = 0.0
var0 = 0.5

[potential]
kind = "free"

[evolution]
dt = 1e-3
t_final = 2.0
snapshot_stride = 10
""",
    "superposition_beat": """
[initial_state]
kind = "superposition"
coeffs = [0.7071067811865476, 0.7071067811865476]

[[initial_state.components]]
kind = "ho_eigenstate"
n = 0

[[initial_state.components]]
kind = "ho_eigenstate"
n = 1
""" + _HO + """
[evolution]
dt = 1e-3
t_final = 10.0
snapshot_stride = 10
""",
    "driven_oscillator": """
[initial_state]
kind = "coherent"
alpha_re = 0.5
omega = 1.0

[potential]
kind = "time_dependent_harmonic"
omega = 1.0
amplitude = 0.1
frequency = 0.5

[evolution]
dt = 1e-3
t_final = 10.0
snapshot_stride = 10
""",
}


def builtin_config(name: str) -> ScenarioConfig:
    try:
        text = BUILTIN_SCENARIOS[name]
    except KeyError:
        raise ConfigError(f"no built-in scenario {name!r}") from None
    return parse_config(text, name)


@dataclass
class RunResult:
    """Everything ``run`` reports: the CSV table, the ledger and the verdict.

    ``table`` maps each CSV column to an array over snapshots (NaN for
    unavailable entries). ``failures`` lists ``(name, worst value, tolerance)``
    for every hard check that did not hold.
    """

    config: ScenarioConfig
    trajectory: Trajectory
    ledger: ThermoLedger
    table: dict
    checks: dict
    failures: list
    probe: object

    @property
    def ok(self) -> bool:
        return not self.failures


def _worst(a):
    a = np.asarray(a, dtype=float)
    a = a[np.isfinite(a)]
    return float(np.max(np.abs(a))) if a.size else 0.0


def analyze(cfg: ScenarioConfig, traj: Trajectory, pot: Potential) -> RunResult:
    params = cfg.params
    D, m = params.D, params.m
    hbar = 2 * m * D
    n = len(traj)
    ledger = law_residuals(traj, pot, params)
    fb = feedback_and_speeds(ledger, params)
    tab = {c: np.full(n, np.nan) for c in CSV_COLUMNS}
    partition, fisher_id, energy_gap, slack_min = (np.zeros(n) for _ in range(4))
    slack_names = {}
    for i, wf in enumerate(traj):
        rep = audit_inequalities(wf, cfg.tolerances["tol_slack"], check=False)
        f = decompose(wf, D)
        vv = velocity_variances(f)
        var_p = hbar ** 2 * rep.var_p
        tab["S_q"][i], tab["S_p"][i], tab["fisher"][i] = rep.S_q, rep.S_p, rep.fisher
        tab["var_x"][i], tab["var_p"][i] = rep.var_x, var_p
        tab["var_u"][i], tab["var_v"][i] = vv.var_u, vv.var_v
        for col, key in _SLACK_COLUMNS.items():
            tab[col][i] = rep.slacks[key]
        name = min(rep.slacks, key=rep.slacks.get)
        slack_min[i] = rep.slacks[name]
        slack_names[i] = name
        partition[i] = vv.partition_residual(var_p, m)
        fisher_id[i] = fisher_identities(wf, D, m, check=False).worst()
        t = traj.times[i]
        energy_gap[i] = (hydrodynamic_energy(wf, pot, t, D=D, mass=m, check=False)
                         - ledger.E[i] / m)
    tab["t"] = np.asarray(traj.times, dtype=float)
    tab["E"] = ledger.E
    tab["S_rate"], tab["S_int_rate"], tab["S_ext_rate"] = (
        ledger.S_rate, ledger.S_int_rate, ledger.S_ext_rate)
    tab["U"], tab["F"] = ledger.U, ledger.F
    tab["W_rate"], tab["Q_rate"] = ledger.W_rate, ledger.Q_rate
    tab["res_first_law"] = ledger.residual_first_law
    tab["res_extremum"] = ledger.residual_extremum
    tab["res_feedback"] = ledger.residual_feedback

    tol = cfg.tolerances
    checks = {
        # name: (worst value, tolerance, passes)
        "inequality_slack": (float(slack_min.min()), -tol["tol_slack"],
                             slack_min.min() >= -tol["tol_slack"]),
        "variance_partition": (_worst(partition), 1e-6, _worst(partition) < 1e-6),
        "fisher_identities": (_worst(fisher_id), 1e-6, _worst(fisher_id) < 1e-6),
        "hydrodynamic_energy": (_worst(energy_gap), 1e-6, _worst(energy_gap) < 1e-6),
        "entropy_production_sign": (float(np.min(ledger.S_int_rate)), -1e-10,
                                    np.min(ledger.S_int_rate) >= -1e-10),
    }
    for key, series, bound in (
        ("entropy_rate", ledger.residual_entropy_rate, tol["tol_rate"]),
        ("first_law", ledger.residual_first_law, tol["tol_rate"]),
        ("extremum", ledger.residual_extremum, tol["tol_rate"]),
        ("feedback", ledger.residual_feedback, tol["tol_rate2"]),
        ("speed_free_energy", fb.residual_speed_free_energy, tol["tol_rate2"]),
        ("speed_entropy", fb.residual_speed_entropy, tol["tol_rate2"]),
    ):
        w = _worst(series)
        checks[key] = (w, bound, w < bound)
    if pot.is_static:
        w = _worst(ledger.W_rate - ledger.W_rate[0]) / max(abs(ledger.W_rate[0]), 1e-300)
        checks["work_rate_constant"] = (w, 1e-6, w < 1e-6)
    failures = [(k, v, b) for k, (v, b, ok) in checks.items() if not ok]
    if not checks["inequality_slack"][2]:
        i = int(np.argmin(slack_min))
        failures[[f[0] for f in failures].index("inequality_slack")] = (
            f"inequality_slack ({slack_names[i]})", slack_min[i], -tol["tol_slack"])
    probe = minimum_entropy_production_probe(ledger)
    return RunResult(cfg, traj, ledger, tab, checks, failures, probe)


def prepare(cfg: ScenarioConfig):
    """``(potential, initial state)``; every failure here is an input error."""
    g = cfg.make_grid()
    params = cfg.params
    pot = cfg.make_potential(g)
    return pot, build_state(cfg.initial_state, g, D=params.D, mass=params.m)


def run_scenario(cfg: ScenarioConfig, prepared=None) -> RunResult:
    """Build the initial state, evolve and analyze. Does no I/O."""
    pot, wf0 = prepare(cfg) if prepared is None else prepared
    params = cfg.params
    ev = cfg.evolution
    traj = evolve(wf0, pot, ev["dt"], cfg.n_steps, ev["snapshot_stride"], ev["scheme"],
                  D=params.D, mass=params.m)
    return analyze(cfg, traj, pot)
