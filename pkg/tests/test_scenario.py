import numpy as np
import pytest

from infodyn import BUILTIN_SCENARIOS, ConfigError, parse_config, run_scenario
from infodyn.scenario import CSV_COLUMNS, builtin_config, load_config

SHORT = """
[grid]
x_min = -12.0
x_max = 12.0
n = 512

[initial_state]
kind = "coherent"
alpha_re = 1.0

[potential]
kind = "harmonic"

[evolution]
dt = 1e-3
t_final = 0.2
snapshot_stride = 10
"""


def test_builtins_parse():
    assert set(BUILTIN_SCENARIOS) == {"stationary_ground", "coherent_oscillation",
                                      "free_spreading", "superposition_beat",
                                      "driven_oscillator"}
    for name in BUILTIN_SCENARIOS:
        cfg = builtin_config(name)
        assert cfg.name == name
        assert cfg.outputs["csv_path"] == f"{name}.csv"


def test_defaults_filled_in():
    cfg = parse_config(SHORT)
    assert cfg.units == {"D": 0.5, "m": 1.0, "beta0": 1.0}
    assert cfg.tolerances == {"tol_slack": 1e-7, "tol_rate": 1e-3, "tol_rate2": 1e-2}
    assert cfg.outputs["precision"] == 12
    assert cfg.n_steps == 200


@pytest.mark.parametrize("patch", [
    ("[grid]", "[grid]\ncolour = 1"),
    ("[evolution]", "[evolutions]\n[evolution]"),
    ('kind = "coherent"', 'kind = "coherent"\nsigma = 2.0'),
    ('kind = "harmonic"', 'kind = "quartic"'),
    ("t_final = 0.2", "t_final = 0.2005"),
    ("snapshot_stride = 10", "snapshot_stride = 7"),
    ("dt = 1e-3", 'dt = "small"'),
    ("n = 512", "n = 512.5"),
    ("[evolution]", "[outputs]\nprecision = 40\n[evolution]"),
    ("[evolution]", "[units]\nD = -1.0\n[evolution]"),
    ("t_final = 0.2", "t_final = 0.02"),
    ("[grid]", "[grid\n"),
])
def test_malformed_configs_rejected(patch):
    old, new = patch
    with pytest.raises(ConfigError):
        parse_config(SHORT.replace(old, new, 1))


def test_missing_section_rejected():
    with pytest.raises(ConfigError):
        parse_config(SHORT.replace('[potential]\nkind = "harmonic"', ""))


def test_superposition_coefficients():
    text = """
[initial_state]
kind = "superposition"
coeffs = [0.6, [0.0, 0.8]]

[[initial_state.components]]
kind = "ho_eigenstate"
n = 0

[[initial_state.components]]
kind = "ho_eigenstate"
n = 2

[potential]
kind = "free"

[evolution]
t_final = 0.1
"""
    spec = parse_config(text).initial_state
    assert spec.coeffs == (0.6 + 0j, 0.8j)
    assert spec.components[1].params == {"n": 2}
    with pytest.raises(ConfigError):
        parse_config(text.replace("0.6,", "0.5,"))


def test_load_config_file_and_builtin(tmp_path):
    p = tmp_path / "mine.toml"
    p.write_text(SHORT)
    assert load_config(p).name == "mine"
    assert load_config("free_spreading").potential["kind"] == "free"
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.toml")


def test_tabulated_potential_reproduces_harmonic():
    cfg = parse_config(SHORT)
    g = cfg.make_grid()
    values = ", ".join(repr(float(v)) for v in 0.5 * g.x ** 2)
    tab = parse_config(SHORT.replace('kind = "harmonic"',
                                     f'kind = "tabulated"\nvalues = [{values}]'))
    a, b = run_scenario(cfg), run_scenario(tab)
    assert np.array_equal(a.trajectory.psi, b.trajectory.psi)
    with pytest.raises(ConfigError):
        parse_config(SHORT.replace('kind = "harmonic"', 'kind = "tabulated"'))


def test_run_table_shape_and_verdict():
    res = run_scenario(parse_config(SHORT))
    assert tuple(res.table) == CSV_COLUMNS
    assert all(len(v) == 21 for v in res.table.values())
    assert res.ok, res.failures
    assert res.probe.classification in ("oscillatory", "other")
    assert np.allclose(res.table["var_p"], 0.5, atol=1e-8)


def test_tight_tolerance_is_reported():
    res = run_scenario(parse_config(SHORT + "\n[tolerances]\ntol_rate = 1e-12\n"))
    assert not res.ok
    assert "first_law" in [f[0] for f in res.failures]
