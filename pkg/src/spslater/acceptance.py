"""The acceptance suite: eleven pass/fail checks of the headline claims.

Each criterion is a function of a shared AcceptanceContext holding the
expensive artifacts (sharp constants, two mass sweeps, the interaction
margins, the probes, the bubble-expansion report).  Building the context is
the costly part -- a few minutes at desk scale (n up to 8192) -- and the
criteria themselves are cheap assertions over it.  ``run_acceptance`` builds
the context, evaluates everything, and prints one PASS/FAIL line per
criterion.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

import numpy as np

from .bubbles import interaction_sup, verify_bubble_estimates
from .constants import sharp_kgn, sharp_kh, thresholds
from .energy import ProblemParams, energy_breakdown, h1_gradient
from .fiber import fiber_from_triple, reduced_I
from .grid import RadialFunction, make_grid
from .solvers import nonexistence_probe, solve_minus, solve_plus
from .sweep import SweepSpec, gamma_plus_continuity, run_sweep

__all__ = ["AcceptanceContext", "build_context", "run_acceptance", "CRITERIA"]

P6_SWEEP_LO = 0.06  # fractions of c1; below ~0.06 c1 the Euler-Lagrange
P6_SWEEP_HI = 0.80  # residual of the p=6 minus branch exceeds 1e-5 at n=8192
INTERACTION_C_FRACTION = 0.8
INTERACTION_EPS = (0.05, 0.025, 0.0125)


@dataclass
class AcceptanceContext:
    g4: object
    consts4: object
    sweep4: object
    pair4: tuple
    continuity4: dict
    g6: object
    consts6: object
    sweep6: object
    interaction: dict
    sweep_global: object
    probe_monotone: dict
    probe_p6: dict
    bubble_report: dict


def build_context(log=lambda msg: None) -> AcceptanceContext:
    """Run every expensive computation the criteria share."""
    # ---- p = 4 side ----------------------------------------------------
    log("constants at n=4096 ...")
    g4 = make_grid(4096, 40.0, "graded")
    K_H = sharp_kh(g4)
    K_GN4 = sharp_kgn(4.0, g4)
    tpl4 = ProblemParams(1.0, 1.0, 4.0, 1.0)
    consts4 = thresholds(tpl4, K_GN4, K_H)

    log("p=4 sweep ...")
    spec4 = SweepSpec(gamma=1.0, a=1.0, p=4.0)
    sweep4 = run_sweep(spec4)

    log("p=4 two-branch pair at c1/2 ...")
    params_half = ProblemParams(1.0, 1.0, 4.0, 0.5 * consts4.c1)
    rp4 = solve_plus(params_half, consts4, grid=g4)
    rm4 = solve_minus(params_half, consts4, init=rp4.u, grid=g4)
    pair4 = (rp4, rm4)

    log("p=4 continuity check ...")
    cont_params = ProblemParams(1.0, 1.0, 4.0, 0.4 * consts4.c1)
    continuity4 = gamma_plus_continuity(cont_params, consts4, g4)

    # ---- p = 6 side ----------------------------------------------------
    log("constants at n=8192 ...")
    g6 = make_grid(8192, 40.0, "graded")
    K_GN6 = sharp_kgn(6.0, g6)
    tpl6 = ProblemParams(1.0, 1.0, 6.0, 1.0)
    consts6 = thresholds(tpl6, K_GN6, K_H)  # K_H is grid-converged at n=4096

    log("p=6 sweep ...")
    fractions = list(np.logspace(np.log10(P6_SWEEP_LO), np.log10(P6_SWEEP_HI), 8))
    spec6 = SweepSpec(gamma=1.0, a=1.0, p=6.0, c_values=fractions,
                      c_as_fraction=True, grid_n=8192)
    sweep6 = run_sweep(spec6)

    log("p=6 interaction margins ...")
    c_int = INTERACTION_C_FRACTION * consts6.c1
    params_int = ProblemParams(1.0, 1.0, 6.0, c_int)
    rp6 = solve_plus(params_int, consts6, grid=g6)
    bound = rp6.energy + consts6.crit_level
    margins = {}
    for eps in INTERACTION_EPS:
        sup_F, t_at = interaction_sup(params_int, rp6, eps)
        margins[eps] = {"sup_F": sup_F, "argmax_t": t_at, "margin": bound - sup_F}
    marg = np.array([margins[e]["margin"] for e in INTERACTION_EPS])
    slope = float(np.polyfit(np.log(INTERACTION_EPS), np.log(np.abs(marg)), 1)[0]) \
        if np.all(marg > 0) else float("nan")
    interaction = {"c": c_int, "gamma_plus": rp6.energy, "bound": bound,
                   "margins": margins, "exponent": slope}

    # ---- global branch and probes ---------------------------------------
    log("global p=5 sweep ...")
    sweep_global = run_sweep(SweepSpec(gamma=1.0, a=-1.0, p=5.0))

    log("nonexistence probes ...")
    probe_monotone = nonexistence_probe(ProblemParams(-1.0, -1.0, 4.0, 1.0), None,
                                        trials=100)
    probe_p6 = nonexistence_probe(ProblemParams(-1.0, 1.0, 6.0, 1.0), consts6,
                                  grid=make_grid(4096, 40.0, "graded"))

    log("bubble expansion report ...")
    bubble_report = verify_bubble_estimates((0.1, 0.05, 0.025, 0.0125), g6)

    return AcceptanceContext(
        g4=g4, consts4=consts4, sweep4=sweep4, pair4=pair4, continuity4=continuity4,
        g6=g6, consts6=consts6, sweep6=sweep6, interaction=interaction,
        sweep_global=sweep_global, probe_monotone=probe_monotone,
        probe_p6=probe_p6, bubble_report=bubble_report,
    )


def _converged_records(ctx):
    """(label, q_rel, el_rel, lambda) for every converged solve in the context."""
    out = []
    for rep, tag in ((ctx.sweep4, "p4"), (ctx.sweep6, "p6")):
        for r in rep.records:
            if r.get("converged_plus"):
                out.append((f"{tag} plus c={r['c']:.4g}", r["q_rel_plus"],
                            r["el_rel_plus"], r["lambda_plus"]))
            if r.get("converged_minus"):
                out.append((f"{tag} minus c={r['c']:.4g}", r["q_rel_minus"],
                            r["el_rel_minus"], r["lambda_minus"]))
    for r in ctx.sweep_global.records:
        if r.get("converged"):
            out.append((f"p5 global c={r['c']:.4g}", r["q_rel"], r["el_rel"], r["lam"]))
    for res, tag in zip(ctx.pair4, ("plus", "minus")):
        if res.converged:
            out.append((f"p4 {tag} c1/2", res.q_rel, res.el_rel, res.lam))
    return out


def criterion_1(ctx):
    """Euler-Lagrange + Pohozaev residuals on every converged solution."""
    recs = _converged_records(ctx)
    bad = [(lbl, q, el) for lbl, q, el, _ in recs if q > 1e-5 or el > 1e-5]
    passed = len(recs) > 0 and not bad
    detail = (f"{len(recs)} converged solves, max q_rel={max(q for _, q, _, _ in recs):.2e}, "
              f"max el_rel={max(e for _, _, e, _ in recs):.2e}" if recs else "no converged solves")
    if bad:
        detail += f"; violations: {bad[:3]}"
    return passed, detail


def criterion_2(ctx):
    """Multiplier signs: positive for gamma > 0, negative on the gamma < 0 probe."""
    recs = _converged_records(ctx)
    lams = [lam for _, _, _, lam in recs]
    neg_ok = ctx.probe_p6["lambda_negative"]
    passed = len(lams) > 0 and all(l > 0 for l in lams) and neg_ok
    detail = (f"min lambda over {len(lams)} gamma>0 solves = {min(lams):.4g}; "
              f"p=6 probe lambda = {ctx.probe_p6['lambda_final']:.4g} (negative: {neg_ok})")
    return passed, detail


def criterion_3(ctx):
    """Two-branch structure at (1,1,4), c = c1/2."""
    rp, rm = ctx.pair4
    k1 = ctx.consts4.k1
    Ap = energy_breakdown(rp.u, ProblemParams(1.0, 1.0, 4.0, rp.u.mass)).A
    Am = energy_breakdown(rm.u, ProblemParams(1.0, 1.0, 4.0, rm.u.mass)).A
    passed = (rp.converged and rm.converged and rp.energy < 0.0 < rm.energy
              and Ap < k1 < Am)
    detail = (f"F+={rp.energy:.5f} F-={rm.energy:.5f}, A+={Ap:.3f} < k1={k1:.3f} < "
              f"A-={Am:.3f}, converged=({rp.converged},{rm.converged})")
    return passed, detail


def criterion_4(ctx):
    """p=4 scaling laws: lambda- slope -2 +/- 0.3; c^2 / c^3 bounds finite."""
    fits = ctx.sweep4.fits
    slope = fits["lambda_minus"]["slope"]
    k2 = fits["lambda_plus_c2_bound"]["K"]
    k3 = fits["abs_gamma_plus_c3_bound"]["K"]
    passed = (abs(slope + 2.0) <= 0.3 and np.isfinite(k2) and np.isfinite(k3))
    detail = (f"lambda- slope={slope:.3f} (want -2 +/- 0.3, residual="
              f"{fits['lambda_minus']['residual']:.3g}), K_c2={k2:.3g}, K_c3={k3:.3g}")
    return passed, detail


def criterion_5(ctx):
    """p=6 critical limit of gamma- and the sqrt(c) multiplier bound."""
    lim = ctx.sweep6.fits["gamma_minus_limit"]
    k_sqrt = ctx.sweep6.fits["lambda_minus_sqrtc_bound"]["K"]
    passed = abs(lim["ratio"] - 1.0) <= 0.05 and np.isfinite(k_sqrt)
    detail = (f"gamma-({lim['smallest_c']:.4f}) = {lim['gamma_minus']:.5f} vs "
              f"crit_level = {lim['crit_level']:.5f} (ratio {lim['ratio']:.4f}); "
              f"K_sqrtc = {k_sqrt:.3g}")
    return passed, detail


def criterion_6(ctx):
    """Strict interaction inequality with margin ~ sqrt(eps)."""
    it = ctx.interaction
    m = [it["margins"][e]["margin"] for e in INTERACTION_EPS]
    # the margin closes like sqrt(eps) as the bubble concentrates, staying
    # strictly positive at every tested width
    ordered = m[0] > m[1] > m[2] > 0.0
    passed = ordered and abs(it["exponent"] - 0.5) <= 0.2
    detail = (f"margins {m[0]:.4f} (eps=0.05), {m[1]:.4f} (0.025), {m[2]:.4f} (0.0125); "
              f"exponent {it['exponent']:.3f} (want 0.5 +/- 0.2)")
    return passed, detail


def criterion_7(ctx):
    """gamma- strictly decreasing; gamma+ continuity under delta-halving."""
    m4 = ctx.sweep4.monotonicity["gamma_minus_strictly_decreasing"]
    m6 = ctx.sweep6.monotonicity["gamma_minus_strictly_decreasing"]
    cont = ctx.continuity4
    passed = m4 and m6 and cont["decreasing"]
    detail = (f"gamma- decreasing: p4={m4}, p6={m6}; continuity gaps "
              f"{['%.3g' % gv for gv in cont['gaps']]} decreasing={cont['decreasing']}")
    return passed, detail


def criterion_8(ctx):
    """Non-existence probes in both gamma < 0 regimes."""
    mono = ctx.probe_monotone
    p6 = ctx.probe_p6
    passed = (mono["monotone_fiber"] and mono["trials"] * mono["t_points"] >= 10000
              and p6["ratio_to_crit"] >= 0.95)
    detail = (f"min g'/sqrt(A) = {mono['min_normalized_gprime']:.4g} over "
              f"{mono['trials']}x{mono['t_points']} samples; p=6 manifold energy ratio "
              f"{p6['ratio_to_crit']:.4f} (>= 0.95), refinement trend "
              f"{'decreasing' if p6['refinement_decreasing'] else 'NOT decreasing'}")
    return passed, detail


def criterion_9(ctx):
    """Global branch: m(c) < 0, lambda > 0, two-term bound pointwise."""
    recs = [r for r in ctx.sweep_global.records if "m" in r]
    bound = ctx.sweep_global.fits["m_two_term_bound"]
    passed = (len(recs) > 0 and all(r["m"] < 0 for r in recs)
              and all(r["lam"] > 0 for r in recs)
              and bound["pointwise_ok"]
              and np.isfinite(bound["K1"]) and np.isfinite(bound["K2"]))
    detail = (f"{len(recs)} masses, max m = {max(r['m'] for r in recs):.4g}, "
              f"min lambda = {min(r['lam'] for r in recs):.4g}; bound K1={bound['K1']:.3g} "
              f"K2={bound['K2']:.3g} pointwise_ok={bound['pointwise_ok']}")
    return passed, detail


def criterion_10(ctx):
    """Oracle equivalences: Poisson, gradient, reduced functional, saturation."""
    # Poisson vs O(n^2) double-sum kernel at n=128
    g = make_grid(128, 12.0, "graded")
    rho = np.exp(-g.r ** 2) * (1.0 + 0.5 * g.r)
    phi = g.poisson(rho)
    kern = 1.0 / np.maximum.outer(g.r, g.r)
    phi_oracle = 4.0 * np.pi * (kern * (g.w * rho)).sum(axis=1)
    pois_rel = float(np.max(np.abs(phi - phi_oracle)) / np.max(np.abs(phi_oracle)))

    # gradient vs central differences on 20 random smooth profiles
    gg = make_grid(512, 30.0, "graded")
    rng = np.random.default_rng(7)
    params = ProblemParams(1.0, 1.0, 4.0, 1.0)
    worst_fd = 0.0
    for _ in range(20):
        u = np.zeros_like(gg.r)
        v = np.zeros_like(gg.r)
        for _ in range(3):
            u += rng.uniform(0.2, 1.0) * np.exp(-rng.uniform(0.3, 2.0) * (gg.r - rng.uniform(0, 2)) ** 2)
            v += rng.uniform(-1.0, 1.0) * np.exp(-rng.uniform(0.3, 2.0) * (gg.r - rng.uniform(0, 2)) ** 2)
        u[-1] = v[-1] = 0.0
        uf = RadialFunction(gg, u)
        grad = h1_gradient(uf, params)
        pair = 4.0 * np.pi * gg.integrate(grad.values * v)
        h = 1e-4

        def F_of(w):
            e = energy_breakdown(RadialFunction(gg, w), params)
            return e.F

        fd = (F_of(u + h * v) - F_of(u - h * v)) / (2.0 * h)
        worst_fd = max(worst_fd, abs(fd - pair) / max(abs(fd), 1e-12))

    # reduced functional vs dense fiber scan
    e = energy_breakdown(RadialFunction(gg, np.exp(-gg.r ** 2)), params)
    prof = fiber_from_triple(e.A, e.B, e.C, params)
    ts = np.linspace(prof.s_plus, prof.s_minus, 10000)
    scan = max(prof.g_at(t) for t in ts)
    i_minus = reduced_I(RadialFunction(gg, np.exp(-gg.r ** 2)), "minus", params)
    scan_rel = abs(i_minus - scan) / abs(scan)

    # sharp-constant maximizers saturate their inequalities
    gm = make_grid(1024, 40.0, "graded")
    K_H, u_h = sharp_kh(gm, return_profile=True)
    eh = energy_breakdown(RadialFunction(gm, u_h), params)
    sat_h = eh.B / (np.sqrt(eh.A) * eh.D ** 1.5) / K_H
    K_G, u_g = sharp_kgn(4.0, gm, return_profile=True)
    eg = energy_breakdown(RadialFunction(gm, u_g), params)
    sat_g = eg.C / (eg.A ** 1.5 * eg.D ** 0.5) / K_G

    passed = (pois_rel <= 1e-3 and worst_fd <= 1e-4 and scan_rel <= 1e-6
              and abs(sat_h - 1) <= 1e-3 and abs(sat_g - 1) <= 1e-3)
    detail = (f"poisson double-sum rel={pois_rel:.2e}; gradient FD worst rel="
              f"{worst_fd:.2e}; I- scan rel={scan_rel:.2e}; saturation "
              f"H={sat_h:.6f} GN={sat_g:.6f}")
    return passed, detail


def criterion_11(ctx):
    """Bubble expansion limits and exponents at their stated tolerances."""
    rep = ctx.bubble_report
    target = np.sqrt(1.0 / ctx.consts6.K_GN)
    a_rel = abs(rep["A_limit"] - target) / target
    c_rel = abs(rep["C_limit"] - target) / target
    passed = (a_rel <= 0.01 and c_rel <= 0.01
              and abs(rep["mass_exponent"] - 1.0) <= 0.05
              and abs(rep["cubic_log_slope"] - 1.0) <= 0.10
              and abs(rep["quintic_exponent"] - 0.5) <= 0.05)
    detail = (f"A limit {rep['A_limit']:.4f} vs {target:.4f} (rel {a_rel:.2e}); "
              f"C limit rel {c_rel:.2e}; exponents mass={rep['mass_exponent']:.3f}, "
              f"cubic-log={rep['cubic_log_slope']:.3f}, quintic={rep['quintic_exponent']:.3f}")
    return passed, detail


CRITERIA = [
    ("1 Euler-Lagrange + Pohozaev residuals", criterion_1),
    ("2 multiplier signs", criterion_2),
    ("3 two-branch structure at c1/2", criterion_3),
    ("4 p=4 scaling laws", criterion_4),
    ("5 p=6 critical limit", criterion_5),
    ("6 strict interaction inequality", criterion_6),
    ("7 monotonicity and continuity", criterion_7),
    ("8 non-existence probes", criterion_8),
    ("9 global branch bounds", criterion_9),
    ("10 oracle equivalences", criterion_10),
    ("11 bubble expansions", criterion_11),
]


def run_acceptance(stream=None, ctx: AcceptanceContext | None = None):
    """Build the context (if not given), evaluate all criteria, print one
    line each.  Returns (results, all_passed)."""
    out = stream if stream is not None else sys.stdout

    def log(msg):
        print(f"[build] {msg}", file=out, flush=True)

    if ctx is None:
        ctx = build_context(log=log)
    results = []
    all_passed = True
    for name, fn in CRITERIA:
        try:
            passed, detail = fn(ctx)
        except Exception as exc:  # a crashed criterion is a failed criterion
            passed, detail = False, f"crashed: {type(exc).__name__}: {exc}"
        results.append({"criterion": name, "passed": bool(passed), "detail": detail})
        all_passed &= bool(passed)
        print(f"{'PASS' if passed else 'FAIL'} - {name}: {detail}", file=out, flush=True)
    return results, all_passed
