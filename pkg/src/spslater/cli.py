"""Command-line front end.

Subcommands: ``constants`` (sharp constants and thresholds), ``solve`` (one
branch at one mass), ``sweep`` (mass sweep from flags or a JSON config),
``bubbles`` (extremal-profile expansion report), ``regimes`` (sign-regime
dispatch table), ``check`` (the full acceptance suite).

JSON outputs are deterministic: keys sorted, no timestamps, and an
``environment`` stamp (interpreter and library versions) so runs can be
compared across machines.  Exit codes: 0 success, 1 solver failure or a
failed check, 2 bad configuration.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import platform
import sys

import numpy as np
import scipy

from . import __version__
from .acceptance import run_acceptance
from .bubbles import verify_bubble_estimates
from .constants import critical_level, sharp_kgn, sharp_kh, thresholds
from .energy import ProblemParams
from .errors import ConfigError, SPSError
from .grid import make_grid
from .solvers import solve_global, solve_minus, solve_plus
from .sweep import SweepSpec, regime_table, run_sweep

__all__ = ["main", "load_sweep_config", "write_sweep_csv"]


def environment_stamp() -> dict:
    return {
        "spslater": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
    }


def _jsonable(obj):
    """Recursively convert dataclasses / numpy scalars / arrays for json."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {k: _jsonable(v) for k, v in dataclasses.asdict(obj).items()}
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    return obj


def _write_json(payload, path):
    payload = dict(payload)
    payload["environment"] = environment_stamp()
    text = json.dumps(_jsonable(payload), sort_keys=True, indent=2) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def load_sweep_config(path) -> SweepSpec:
    """Parse a JSON sweep config; field names mirror SweepSpec one-to-one.

    Unknown keys are rejected rather than ignored -- a typo in a config file
    must fail loudly, not silently run the default.
    """
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}")
    if not isinstance(raw, dict):
        raise ConfigError("sweep config must be a JSON object")
    fields = {f.name for f in dataclasses.fields(SweepSpec)}
    unknown = sorted(set(raw) - fields)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    missing = [k for k in ("gamma", "a", "p") if k not in raw]
    if missing:
        raise ConfigError(f"config missing required keys: {', '.join(missing)}")
    try:
        return SweepSpec(**raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad config value: {exc}")


def _csv_cell(v):
    return "" if v is None else "%.12g" % v


def write_sweep_csv(report, path):
    """Flat per-mass table: branch columns for a > 0, (c, m, lambda) else."""
    spec = report.spec
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        if spec["a"] > 0:
            w.writerow(["c", "gamma_plus", "gamma_minus", "lambda_plus", "lambda_minus"])
            for r in report.records:
                w.writerow([_csv_cell(r.get(k)) for k in
                            ("c", "gamma_plus", "gamma_minus", "lambda_plus", "lambda_minus")])
        else:
            w.writerow(["c", "m", "lambda"])
            for r in report.records:
                w.writerow([_csv_cell(r.get(k)) for k in ("c", "m", "lam")])


def _grid_from_args(args):
    return make_grid(args.n, args.r_max, args.spacing)


def cmd_constants(args):
    g = _grid_from_args(args)
    K_H = sharp_kh(g)
    K_GN = sharp_kgn(args.p, g)
    payload = {"command": "constants", "p": args.p, "gamma": args.gamma, "a": args.a,
               "grid": {"n": g.n, "r_max": g.r_max, "spacing": g.spacing},
               "K_H": K_H, "K_GN": K_GN}
    print(f"K_H  = {K_H:.8f}")
    print(f"K_GN = {K_GN:.8f}  (p = {args.p:g})")
    if args.gamma > 0 and args.a > 0:
        sc = thresholds(ProblemParams(args.gamma, args.a, args.p, 1.0), K_GN, K_H)
        payload.update(M=sc.M, N=sc.N, k0=sc.k0, k1=sc.k1, c1=sc.c1)
        print(f"M    = {sc.M:.8f}")
        print(f"N    = {sc.N:.8f}")
        print(f"k0   = {sc.k0:.8f}")
        print(f"k1   = {sc.k1:.8f}")
        print(f"c1   = {sc.c1:.8f}")
        if sc.crit_level is not None:
            payload["crit_level"] = sc.crit_level
            print(f"critical level = {sc.crit_level:.8f}")
    elif args.p == 6.0 and args.a > 0:
        payload["crit_level"] = critical_level(args.a, K_GN)
        print(f"critical level = {payload['crit_level']:.8f}")
    if args.json:
        _write_json(payload, args.json)
    return 0


def cmd_solve(args):
    g = _grid_from_args(args)
    params = ProblemParams(args.gamma, args.a, args.p, args.c)
    if args.branch in ("plus", "minus"):
        sc = thresholds(params, sharp_kgn(args.p, g), sharp_kh(g))
        if args.branch == "plus":
            res = solve_plus(params, sc, grid=g, max_iter=args.max_iter)
        else:
            res = solve_minus(params, sc, grid=g, max_iter=args.max_iter)
    else:
        res = solve_global(params, grid=g, max_iter=args.max_iter)
    print(f"branch      = {res.branch}")
    print(f"energy      = {res.energy:.10f}")
    print(f"lambda      = {res.lam:.10f}")
    print(f"q_rel       = {res.q_rel:.3e}")
    print(f"el_rel      = {res.el_rel:.3e}")
    print(f"grad_rel    = {res.grad_rel:.3e}")
    print(f"iterations  = {res.iterations}")
    print(f"converged   = {res.converged}")
    if args.json:
        payload = {"command": "solve", "branch": res.branch,
                   "gamma": args.gamma, "a": args.a, "p": args.p, "c": args.c,
                   "grid": {"n": g.n, "r_max": res.u.grid.r_max, "spacing": g.spacing},
                   "energy": res.energy, "lambda": res.lam, "q_rel": res.q_rel,
                   "el_rel": res.el_rel, "eq_rel": res.eq_rel, "grad_rel": res.grad_rel,
                   "iterations": res.iterations, "converged": res.converged}
        if args.profile:
            payload["r"] = res.u.grid.r
            payload["u"] = res.u.values
        _write_json(payload, args.json)
    return 0 if res.converged else 1


def cmd_sweep(args):
    if args.config:
        spec = load_sweep_config(args.config)
    else:
        if args.gamma is None or args.a is None or args.p is None:
            raise ConfigError("sweep needs --config or all of --gamma/--a/--p")
        spec = SweepSpec(gamma=args.gamma, a=args.a, p=args.p,
                         c_values=args.c_values, c_as_fraction=args.c_as_fraction,
                         grid_n=args.n, grid_r_max=args.r_max,
                         grid_spacing=args.spacing, max_iter=args.max_iter,
                         seed=args.seed)
    report = run_sweep(spec)
    for rec in report.records:
        if "gamma_plus" in rec or "gamma_minus" in rec:
            print(f"c={rec['c']:.5g}  gamma+={rec.get('gamma_plus', float('nan')):.6g}  "
                  f"gamma-={rec.get('gamma_minus', float('nan')):.6g}  "
                  f"lambda+={rec.get('lambda_plus', float('nan')):.6g}  "
                  f"lambda-={rec.get('lambda_minus', float('nan')):.6g}")
        elif "m" in rec:
            print(f"c={rec['c']:.5g}  m={rec['m']:.6g}  lambda={rec['lam']:.6g}")
        else:
            print(json.dumps(_jsonable(rec), sort_keys=True))
    for name, fit in report.fits.items():
        if "slope" in fit:
            extra = "  [FLAGGED]" if fit.get("flagged") else ""
            print(f"fit {name}: slope={fit['slope']:.4f} residual={fit['residual']:.3g}{extra}")
        else:
            print(f"fit {name}: " + json.dumps(_jsonable(fit), sort_keys=True))
    for name, verdict in report.monotonicity.items():
        print(f"monotonicity {name}: {verdict}")
    if report.failures:
        for f in report.failures:
            print(f"FAILURE c={f['c']:.5g} {f['branch']}: {f['error']}", file=sys.stderr)
    json_path = args.json or spec.output
    if json_path:
        _write_json({"command": "sweep", "report": report}, json_path)
    if args.csv:
        if spec.gamma < 0:
            print("note: no per-mass table in a non-existence regime; csv skipped",
                  file=sys.stderr)
        else:
            write_sweep_csv(report, args.csv)
    return 1 if report.failures else 0


def cmd_bubbles(args):
    g = make_grid(args.n, args.r_max, args.spacing)
    eps = sorted((float(e) for e in args.eps.split(",")), reverse=True)
    rep = verify_bubble_estimates(tuple(eps), g)
    for k in ("A_limit", "C_limit", "mass_exponent", "quintic_exponent", "cubic_log_slope"):
        print(f"{k:18s} = {rep[k]:.6f}  (stderr {rep[k + '_stderr']:.2e})")
    if args.json:
        _write_json({"command": "bubbles", "eps": eps, "report": rep,
                     "grid": {"n": g.n, "r_max": g.r_max, "spacing": g.spacing}},
                    args.json)
    return 0


DEFAULT_REGIMES = [
    (1.0, 1.0, 4.0, 1.0),
    (1.0, -1.0, 5.0, 1.0),
    (-1.0, -1.0, 4.0, 1.0),
    (-1.0, 1.0, 6.0, 1.0),
]


def cmd_regimes(args):
    if args.config:
        try:
            with open(args.config) as fh:
                raw = json.load(fh)
            configs = [ProblemParams(row["gamma"], row["a"], row["p"], row["c"])
                       for row in raw]
        except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad regimes config: {exc}")
    else:
        configs = [ProblemParams(*row) for row in DEFAULT_REGIMES]
    rows = regime_table(configs, grid=make_grid(args.n, args.r_max, args.spacing))
    ok = True
    for row in rows:
        mark = "ok " if row["match"] else "BAD"
        ok &= row["match"]
        print(f"{mark} gamma={row['gamma']:+g} a={row['a']:+g} p={row['p']:g} "
              f"c={row['c']:g}: predicted '{row['predicted']}', observed '{row['observed']}'")
    if args.json:
        _write_json({"command": "regimes", "rows": rows}, args.json)
    return 0 if ok else 1


def cmd_check(args):
    results, all_passed = run_acceptance()
    if args.json:
        _write_json({"command": "check", "results": results,
                     "all_passed": all_passed}, args.json)
    print(f"\n{'ALL CRITERIA PASS' if all_passed else 'SOME CRITERIA FAILED'}")
    return 0 if all_passed else 1


def _comma_floats(text):
    try:
        return [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _add_grid_args(p, n=4096):
    p.add_argument("--n", type=int, default=n, help="number of radial nodes")
    p.add_argument("--r-max", type=float, default=40.0, help="domain radius")
    p.add_argument("--spacing", choices=("uniform", "graded"), default="graded")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="spslater",
        description="Normalized solutions of the Schroedinger-Poisson-Slater equation")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_const = sub.add_parser("constants", help="sharp constants and thresholds")
    p_const.add_argument("--p", type=float, required=True)
    p_const.add_argument("--gamma", type=float, default=1.0)
    p_const.add_argument("--a", type=float, default=1.0)
    _add_grid_args(p_const)
    p_const.add_argument("--json", help="write JSON here ('-' for stdout)")
    p_const.set_defaults(func=cmd_constants)

    p_solve = sub.add_parser("solve", help="solve one branch at one mass")
    p_solve.add_argument("--branch", choices=("plus", "minus", "global"), required=True)
    p_solve.add_argument("--gamma", type=float, required=True)
    p_solve.add_argument("--a", type=float, required=True)
    p_solve.add_argument("--p", type=float, required=True)
    p_solve.add_argument("--c", type=float, required=True)
    p_solve.add_argument("--max-iter", type=int, default=20000)
    _add_grid_args(p_solve)
    p_solve.add_argument("--json", help="write JSON here ('-' for stdout)")
    p_solve.add_argument("--profile", action="store_true",
                         help="include the radial profile in the JSON output")
    p_solve.set_defaults(func=cmd_solve)

    p_sweep = sub.add_parser("sweep", help="mass sweep with scaling-law fits")
    p_sweep.add_argument("--config", help="JSON config (fields mirror SweepSpec)")
    p_sweep.add_argument("--gamma", type=float)
    p_sweep.add_argument("--a", type=float)
    p_sweep.add_argument("--p", type=float)
    p_sweep.add_argument("--c-values", type=_comma_floats, default=None,
                         help="comma-separated masses (default: 8 log-spaced)")
    p_sweep.add_argument("--c-as-fraction", action="store_true",
                         help="treat --c-values as fractions of c1")
    p_sweep.add_argument("--max-iter", type=int, default=20000)
    p_sweep.add_argument("--seed", type=int, default=0)
    _add_grid_args(p_sweep)
    p_sweep.add_argument("--csv", help="write the flat per-mass table here")
    p_sweep.add_argument("--json", help="write the full report here ('-' for stdout)")
    p_sweep.set_defaults(func=cmd_sweep)

    p_bub = sub.add_parser("bubbles", help="extremal-profile expansion report")
    p_bub.add_argument("--eps", default="0.1,0.05,0.025,0.0125",
                       help="comma-separated concentration scales")
    _add_grid_args(p_bub, n=8192)
    p_bub.add_argument("--json", help="write JSON here ('-' for stdout)")
    p_bub.set_defaults(func=cmd_bubbles)

    p_reg = sub.add_parser("regimes", help="sign-regime dispatch table")
    p_reg.add_argument("--config", help="JSON list of {gamma,a,p,c} rows")
    _add_grid_args(p_reg, n=1024)
    p_reg.set_defaults(func=cmd_regimes)
    p_reg.add_argument("--json", help="write JSON here ('-' for stdout)")

    p_check = sub.add_parser("check", help="run the acceptance suite")
    p_check.add_argument("--json", help="write results here ('-' for stdout)")
    p_check.set_defaults(func=cmd_check)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        # bad parameter combinations (c >= c1, wrong sign regime, ...)
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except SPSError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
