"""Command-line front end: ``infodyn run | audit | list-scenarios``.

Exit codes: 0 when every hard check held, 1 for a numerical invariant
violation, 2 for bad input (config, grid, state flags, usage).
"""
from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from .errors import GridError, IdentityViolation, InequalityViolation, InfodynError
from .grid import make_grid
from .hydro import decompose, fisher_identities, velocity_variances
from .info import audit_inequalities, moments
from .scenario import (BUILTIN_SCENARIOS, CSV_COLUMNS, FIELD_COLUMNS, RunResult,
                       load_config, prepare, run_scenario)
from .states import StateSpec, build_state

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    # argparse already exits with 2 on usage errors; keep the help text too
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(value, precision):
    return "" if not np.isfinite(value) else f"{value:.{precision}g}"


def write_csv(path, table, precision=12):
    n = len(table["t"])
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for i in range(n):
            w.writerow([_fmt(table[c][i], precision) for c in CSV_COLUMNS])


def write_fields(path, result: RunResult, precision=12):
    traj, D = result.trajectory, result.config.units["D"]
    x = traj.grid.x
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(FIELD_COLUMNS)
        for t, wf in zip(traj.times, traj):
            f = decompose(wf, D)
            for row in zip(np.full(x.size, t), x, f.rho, f.u, f.v, f.q_pot):
                w.writerow([_fmt(v, precision) for v in row])


def _summary(result: RunResult, out):
    tab = result.table
    print(f"scenario {result.config.name}: {len(tab['t'])} snapshots, "
          f"t = {tab['t'][0]:g} .. {tab['t'][-1]:g}", file=out)
    for col in ("res_first_law", "res_extremum", "res_feedback",
                "slack_eq3", "slack_eq7a", "slack_eq7b", "slack_eq26"):
        a = tab[col][np.isfinite(tab[col])]
        if a.size:
            print(f"  {col:<16} min {a.min(): .3e}  max {a.max(): .3e}", file=out)
        else:
            print(f"  {col:<16} unavailable", file=out)
    for name, (value, bound, ok) in result.checks.items():
        print(f"  {'ok  ' if ok else 'FAIL'} {name:<24} {value: .3e} (bound {bound:g})",
              file=out)
    print(f"  entropy production: {result.probe.classification}", file=out)
    print("verdict: " + ("all invariants held" if result.ok else "VIOLATION"), file=out)


def cmd_run(args) -> int:
    try:
        cfg = load_config(args.config)
        prepared = prepare(cfg)
    except (ValueError, InfodynError) as exc:
        kind = "grid error" if isinstance(exc, GridError) else "error"
        print(f"{kind}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    precision = args.precision if args.precision is not None else cfg.outputs["precision"]
    csv_path = Path(args.output or cfg.outputs["csv_path"])
    try:
        result = run_scenario(cfg, prepared)
    except (ValueError, InfodynError) as exc:
        print(f"violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    write_csv(csv_path, result.table, precision)
    if args.fields_dump or cfg.outputs["fields_dump"]:
        write_fields(csv_path.with_name(csv_path.stem + "_fields.csv"), result, precision)
    if not args.quiet:
        _summary(result, sys.stdout)
        print(f"wrote {csv_path}")
    for name, value, bound in result.failures:
        print(f"violation: {name}: {value:.3e} (bound {bound:g})", file=sys.stderr)
    return EXIT_OK if result.ok else EXIT_VIOLATION


def _audit_spec(args) -> StateSpec:
    if args.ho is not None:
        n, omega = args.ho
        return StateSpec("ho_eigenstate", {"n": int(n) if float(n).is_integer() else n,
                                           "omega": omega})
    if args.gaussian is not None:
        x0, p0, var0 = args.gaussian
        return StateSpec("gaussian", {"x0": x0, "p0": p0, "var0": var0})
    re, im, omega = args.coherent
    return StateSpec("coherent", {"alpha_re": re, "alpha_im": im, "omega": omega})


def cmd_audit(args) -> int:
    try:
        spec = _audit_spec(args)
        g = make_grid(args.x_min, args.x_max, args.n)
        wf = build_state(spec, g, D=args.D, mass=args.m)
    except (ValueError, InfodynError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    p = args.precision
    rep = audit_inequalities(wf, args.tol_slack, check=False)
    f = decompose(wf, args.D)
    vv = velocity_variances(f)
    hbar = 2 * args.m * args.D
    ids = fisher_identities(wf, args.D, args.m, check=False)
    m = moments(wf)
    lines = [
        ("S_q", rep.S_q), ("S_p", rep.S_p), ("S_q+S_p", rep.entropy_sum),
        ("fisher", rep.fisher), ("mean_x", m.mean_x), ("var_x", m.var_x),
        ("mean_p", hbar * m.mean_p), ("var_p", hbar ** 2 * m.var_p),
        ("var_p_cl", hbar ** 2 * rep.var_p_cl),
        ("var_u", vv.var_u), ("var_v", vv.var_v),
        ("partition_residual", vv.partition_residual(hbar ** 2 * m.var_p, args.m)),
        ("mean_Q", ids.mean_q),
    ]
    lines += [(f"identity.{k}", v) for k, v in ids.as_dict().items()]
    lines += [(f"slack.{k}", v) for k, v in rep.slacks.items()]
    width = max(len(k) for k, _ in lines)
    for k, v in lines:
        print(f"{k:<{width}}  {v:.{p}g}")
    status = EXIT_OK
    for k, v in rep.violations(args.tol_slack).items():
        print(f"violation: {InequalityViolation(k, v, args.tol_slack)}", file=sys.stderr)
        status = EXIT_VIOLATION
    for k, v in ids.as_dict().items():
        if abs(v) > 1e-6:
            print(f"violation: {IdentityViolation(k, v, 1e-6)}", file=sys.stderr)
            status = EXIT_VIOLATION
    print("verdict: " + ("all invariants held" if status == EXIT_OK else "VIOLATION"))
    return status


def cmd_list(args) -> int:
    for name in sorted(BUILTIN_SCENARIOS):
        print(name)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="infodyn", description="Information-theoretic and "
                     "thermodynamic audits of 1-D Schroedinger evolutions.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    run = sub.add_parser("run", help="evolve a scenario and write the ledger CSV")
    run.add_argument("config", help="TOML config file or built-in scenario name")
    run.add_argument("-o", "--output", help="CSV path (overrides outputs.csv_path)")
    run.add_argument("--fields-dump", action="store_true",
                     help="also write t, x, rho, u, v, Q for every snapshot")
    run.add_argument("--precision", type=int, default=None,
                     help="significant digits in the CSV (default from config, 12)")
    run.add_argument("--quiet", action="store_true", help="print violations only")
    run.set_defaults(func=cmd_run)

    audit = sub.add_parser("audit", help="single-state information report")
    which = audit.add_mutually_exclusive_group(required=True)
    which.add_argument("--ho", nargs=2, type=float, metavar=("N", "OMEGA"))
    which.add_argument("--gaussian", nargs=3, type=float, metavar=("X0", "P0", "VAR0"))
    which.add_argument("--coherent", nargs=3, type=float, metavar=("RE", "IM", "OMEGA"))
    audit.add_argument("--x-min", type=float, default=-20.0)
    audit.add_argument("--x-max", type=float, default=20.0)
    audit.add_argument("--n", type=int, default=2048)
    audit.add_argument("--D", type=float, default=0.5)
    audit.add_argument("--m", type=float, default=1.0)
    audit.add_argument("--tol-slack", type=float, default=1e-7)
    audit.add_argument("--precision", type=int, default=12)
    audit.set_defaults(func=cmd_audit)

    ls = sub.add_parser("list-scenarios", help="names of the built-in scenarios")
    ls.set_defaults(func=cmd_list)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
