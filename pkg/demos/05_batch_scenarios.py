"""
Built-in scenarios and the command line
=======================================

``infodyn run`` evolves a scenario, writes one CSV row per snapshot and
exits non-zero if any invariant fails. The same runs are available from
Python.
"""
import csv
import subprocess
import sys
import tempfile
from pathlib import Path

from infodyn import BUILTIN_SCENARIOS, builtin_config, run_scenario

for name in sorted(BUILTIN_SCENARIOS):
    res = run_scenario(builtin_config(name))
    worst = max(res.checks, key=lambda k: res.checks[k][0] / abs(res.checks[k][1])
                if res.checks[k][1] > 0 else 0)
    print(f"{name:<22} {'ok' if res.ok else 'FAILED':<7} probe: {res.probe.classification:<18}"
          f" tightest check: {worst}")

# A config file is a small TOML document; omitted sections take defaults.
config = """
[initial_state]
kind = "gaussian"
x0 = -2.0
p0 = 1.5
var0 = 0.4

[potential]
kind = "harmonic"
omega = 0.5

[evolution]
dt = 1e-3
t_final = 4.0
snapshot_stride = 20
"""
with tempfile.TemporaryDirectory() as tmp:
    cfg = Path(tmp) / "squeezed.toml"
    cfg.write_text(config)
    out = Path(tmp) / "squeezed.csv"
    r = subprocess.run([sys.executable, "-m", "infodyn", "run", str(cfg), "-o", str(out)],
                       capture_output=True, text=True)
    print("\n" + r.stdout)
    with open(out, newline="") as fh:
        rows = list(csv.DictReader(fh))
    print("t, var_x, S_q at a few snapshots:")
    for row in rows[::50]:
        print(f"  {row['t']:>6}  {float(row['var_x']):.6f}  {float(row['S_q']):.6f}")
