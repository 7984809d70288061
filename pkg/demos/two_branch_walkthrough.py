"""Walk through the two-branch structure at p = 4.

For gamma > 0, a > 0 and mass below the threshold c1 the constrained problem
has two radial solutions: a local minimizer with negative energy inside the
kinetic well A < k1, and a mountain-pass solution with positive energy
outside it.  This script computes the sharp constants, solves both branches
at one mass, and prints the quantities that tell them apart.
"""

import argparse

import numpy as np

from spslater import (
    ProblemParams,
    energy_breakdown,
    fiber_from_triple,
    make_grid,
    sharp_kgn,
    sharp_kh,
    solve_minus,
    solve_plus,
    thresholds,
)


def describe(tag, res, params):
    b = energy_breakdown(res.u, params)
    print(f"--- {tag} ({res.branch}) ---")
    print(f"  converged        : {res.converged} ({res.iterations} iterations)")
    print(f"  energy F         : {res.energy:+.8f}")
    print(f"  multiplier lambda: {res.lam:.8f}")
    print(f"  kinetic A        : {b.A:.6f}")
    print(f"  Hartree B        : {b.B:.6f}")
    print(f"  power C          : {b.C:.6f}")
    print(f"  residuals        : Q {res.q_rel:.2e}, EL {res.el_rel:.2e}, grad {res.grad_rel:.2e}")
    print(f"  domain           : R = {res.u.grid.r_max:.2f}, n = {res.u.grid.n}")
    return b


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=2048, help="radial nodes")
    ap.add_argument("--fraction", type=float, default=0.5,
                    help="mass as a fraction of the threshold c1")
    args = ap.parse_args()

    g = make_grid(args.n, 40.0, "graded")
    probe = ProblemParams(gamma=1.0, a=1.0, p=4.0, c=1.0)
    sc = thresholds(probe, sharp_kgn(4.0, g), sharp_kh(g))
    print("sharp constants and thresholds (gamma = a = 1, p = 4)")
    print(f"  K_H  = {sc.K_H:.8f}   K_GN = {sc.K_GN:.8f}")
    print(f"  c1   = {sc.c1:.6f}  (admissible masses c < c1)")
    print(f"  k0   = {sc.k0:.6f}  (well depth scale: A+ < k0 c^3 for small c)")
    print(f"  k1   = {sc.k1:.6f}  (well boundary: A+ < k1 < A-)")
    print()

    c = args.fraction * sc.c1
    params = ProblemParams(gamma=1.0, a=1.0, p=4.0, c=c)
    print(f"solving both branches at c = {c:.6f} = {args.fraction} * c1")
    rp = solve_plus(params, sc, grid=g)
    bp = describe("local minimizer u_c+", rp, params)
    rm = solve_minus(params, sc, grid=g, init=rp.u)
    bm = describe("mountain pass u_c-", rm, params)

    print("--- the picture the two branches make ---")
    print(f"  F(u+) = {rp.energy:+.6f} < 0 < F(u-) = {rm.energy:+.6f}")
    print(f"  A(u+) = {bp.A:.4f} < k1 = {sc.k1:.4f} < A(u-) = {bm.A:.4f}")
    print(f"  both multipliers positive: {rp.lam:.6f}, {rm.lam:.6f}")

    # the fiber map of the plus solution: t -> F(u^t) has a local min at
    # t = 1 (the solution itself) and a max at s- > 1, whose rescaling
    # seeds the mountain-pass solve
    prof = fiber_from_triple(bp.A, bp.B, bp.C, params)
    print(f"  fiber roots of u+: s+ = {prof.s_plus:.6f} (its own scale), "
          f"s- = {prof.s_minus:.4f} (mountain-pass direction)")
    print(f"  fiber values     : g(s+) = {prof.g_at(prof.s_plus):+.6f}, "
          f"g(s-) = {prof.g_at(prof.s_minus):+.6f}")
    gap = prof.g_at(prof.s_minus) - rm.energy
    print(f"  F(u-) sits {gap:.3e} below the plus-fiber max: the dilation "
          "line through u+ is one admissible path, and the optimal pass "
          "undercuts it")


if __name__ == "__main__":
    main()
