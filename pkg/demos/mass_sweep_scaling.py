"""Sweep the mass constraint and fit the small-c scaling laws.

Runs both branches over a log-spaced ladder of masses below c1 and prints
the fitted power laws: on the plus branch gamma+(c) ~ -K c^3 and
lambda+(c) ~ K c^2, on the minus branch lambda-(c) ~ K c^-2 (p = 4).
Writes the flat per-mass table to CSV when asked.
"""

import argparse

import numpy as np

from spslater import SweepSpec, run_sweep
from spslater.cli import write_sweep_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=1024, help="radial nodes")
    ap.add_argument("--points", type=int, default=6, help="masses in the ladder")
    ap.add_argument("--csv", help="write the per-mass table here")
    args = ap.parse_args()

    fracs = [0.08 * (0.45 / 0.08) ** (i / (args.points - 1)) for i in range(args.points)]
    spec = SweepSpec(gamma=1.0, a=1.0, p=4.0, c_values=fracs, c_as_fraction=True,
                     grid_n=args.n)
    report = run_sweep(spec)

    print(f"c1 = {report.constants['c1']:.6f}; sweeping c/c1 in "
          f"[{fracs[0]:.3f}, {fracs[-1]:.3f}]")
    print(f"{'c':>10} {'gamma+':>14} {'lambda+':>12} {'gamma-':>14} {'lambda-':>12}")
    for rec in report.records:
        print(f"{rec['c']:10.5f} {rec['gamma_plus']:14.8f} {rec['lambda_plus']:12.6f} "
              f"{rec['gamma_minus']:14.6f} {rec['lambda_minus']:12.4f}")
    print()

    fits = report.fits
    print("log-log fits (lambda+ ~ c^2, |gamma+| ~ c^3, lambda- ~ c^-2):")
    for key in ("lambda_plus", "abs_gamma_plus", "lambda_minus"):
        f = fits[key]
        line = (f"  {key:15s}: slope {f['slope']:+.4f}  "
                f"prefactor {np.exp(f['intercept']):.6g}  residual {f['residual']:.3g}")
        if "expected_slope" in f:
            line += f"  (expected {f['expected_slope']:+.1f})"
        print(line)
    print()
    print("small-mass bound constants (finiteness is the content):")
    print(f"  lambda+  <= K c^2 with K = {fits['lambda_plus_c2_bound']['K']:.6g}")
    print(f"  |gamma+| <= K c^3 with K = {fits['abs_gamma_plus_c3_bound']['K']:.6g}")
    mono = report.monotonicity
    print(f"  gamma- strictly decreasing in c: "
          f"{mono['gamma_minus_strictly_decreasing']}")

    if report.failures:
        print(f"\n{len(report.failures)} solves failed:")
        for f in report.failures:
            print(f"  c={f['c']:.5f} {f['branch']}: {f['error']}")

    if args.csv:
        write_sweep_csv(report, args.csv)
        print(f"\nper-mass table written to {args.csv}")


if __name__ == "__main__":
    main()
