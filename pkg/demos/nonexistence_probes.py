"""Probe the parameter regimes where no normalized solution exists.

Two sign regimes admit no solution, for two different reasons, and the
probes gather the corresponding numerical evidence (they never claim a
proof):

  gamma < 0, a < 0   every term in the fiber derivative g'(t) is positive,
                     so no dilation of any profile is stationary; the probe
                     reports min g'(t)/sqrt(A) over random profiles.

  gamma < 0, a > 0,  stationary points of the Pohozaev-constrained problem
  p = 6              exist but sit above the compactness level with a
                     negative multiplier; projected descent approaches the
                     level 1/(3 sqrt(a K_GN)) from above without attaining
                     it, and refining the grid only walks it closer.
"""

import argparse

from spslater import (
    ProblemParams,
    make_grid,
    nonexistence_probe,
    regime_table,
    sharp_kgn,
    sharp_kh,
    thresholds,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=1024, help="radial nodes")
    ap.add_argument("--trials", type=int, default=60,
                    help="random profiles for the monotone-fiber probe")
    args = ap.parse_args()

    g = make_grid(args.n, 40.0, "graded")

    print("== regime dispatch ==")
    rows = regime_table([ProblemParams(1.0, 1.0, 4.0, 1.0),
                         ProblemParams(1.0, -1.0, 5.0, 1.0),
                         ProblemParams(-1.0, -1.0, 4.0, 1.0),
                         ProblemParams(-1.0, 1.0, 6.0, 1.0)], grid=g)
    for r in rows:
        print(f"  gamma={r['gamma']:+.0f} a={r['a']:+.0f} p={r['p']:.0f}: "
              f"predicted '{r['predicted']}', observed '{r['observed']}', "
              f"match={r['match']}")
    print()

    print("== gamma < 0, a < 0: monotone fibers ==")
    probe = nonexistence_probe(ProblemParams(-1.0, -1.0, 4.0, 1.0), None,
                               trials=args.trials, grid=g)
    print(f"  {probe['trials']} random profiles x {probe['t_points']} dilations")
    print(f"  min g'(t)/sqrt(A) = {probe['min_normalized_gprime']:.6f}")
    print(f"  fiber monotone in every sample: {probe['monotone_fiber']}")
    print("  (a positive floor means no dilation is ever stationary)")
    print()

    print("== gamma < 0, a > 0, p = 6: level approached from above ==")
    params6 = ProblemParams(-1.0, 1.0, 6.0, 1.0)
    # the probe only needs K_GN; thresholds live in the two-branch regime
    sc6 = thresholds(ProblemParams(1.0, 1.0, 6.0, 1.0),
                     sharp_kgn(6.0, g), sharp_kh(g))
    probe6 = nonexistence_probe(params6, sc6, grid=g)
    print(f"  critical level 1/(3 sqrt(a K_GN)) = {probe6['crit_level']:.6f}")
    print(f"  min projected energy on the manifold = {probe6['min_F_on_manifold']:.6f} "
          f"(ratio {probe6['ratio_to_crit']:.4f}, strictly above 1)")
    print(f"  multiplier at the final iterate = {probe6['lambda_final']:.4f} "
          f"(negative: {probe6['lambda_negative']})")
    sizes = probe6["refinement_sizes"]
    energies = probe6["refinement_energies"]
    print("  refinement trend (projected bubble):")
    for n, e in zip(sizes, energies):
        print(f"    n = {n:5d}: F = {e:.6f} (excess {e - probe6['crit_level']:+.2e})")
    print(f"  decreasing toward the level: {probe6['refinement_decreasing']}")
    print("  (the infimum equals the level and is not attained)")


if __name__ == "__main__":
    main()
