"""Mass sweeps, scaling-exponent fits, and the sign-regime dispatch table.

A sweep solves the branch problems across a list of masses c and fits the
small-c power laws of the multipliers and energy levels: lambda+ against the
c^2 upper bound, |gamma+| against c^3, lambda- against c^{-(2p-4)/(3p-10)}
(p < 6) or c^{1/2} (p = 6), and for p = 6 the approach of gamma- to the
critical level.  Asymptotic fits drop the largest two masses -- the laws are
c -> 0 statements -- and every fitted exponent carries its least-squares
residual; fits with residual above 0.1 are flagged, never silently reported.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .constants import SharpConstants, sharp_kgn, sharp_kh, thresholds
from .energy import ProblemParams, energy_breakdown
from .errors import SPSError
from .grid import make_grid
from .solvers import nonexistence_probe, solve_global, solve_minus, solve_plus

__all__ = ["SweepSpec", "SweepReport", "run_sweep", "regime_table"]

SWEEP_C_LO = 0.05  # default sweep range, as fractions of c1
SWEEP_C_HI = 0.80
SWEEP_POINTS = 8
FIT_RESIDUAL_FLAG = 0.1


@dataclass
class SweepSpec:
    """One sweep: parameter template, masses, grid, tolerances, output.

    ``c_values`` (ascending, nonempty) may be omitted; the default is 8
    log-spaced masses in [0.05 c1, 0.8 c1] computed from the sharp constants
    at run time.  Masses are absolute unless ``c_as_fraction`` is set, in
    which case they are fractions of c1.
    """

    gamma: float
    a: float
    p: float
    c_values: list | None = None
    c_as_fraction: bool = False
    grid_n: int = 4096
    grid_r_max: float = 40.0
    grid_spacing: str = "graded"
    max_iter: int = 20000
    newton_tol: float = 5e-7
    seed: int = 0
    output: str | None = None

    def __post_init__(self):
        if self.c_values is not None:
            cs = [float(c) for c in self.c_values]
            if not cs:
                raise ValueError("c_values must be non-empty when given")
            if any(np.diff(cs) <= 0) or any(c <= 0 for c in cs):
                raise ValueError("c_values must be positive and sorted ascending")
            self.c_values = cs


@dataclass
class SweepReport:
    """Per-mass records plus fitted exponents and monotonicity verdicts."""

    spec: dict
    constants: dict
    records: list
    fits: dict
    monotonicity: dict
    failures: list = field(default_factory=list)


def _loglog_fit(cs, ys):
    """slope/intercept/rms-residual of log y vs log c; flags poor fits."""
    x = np.log(np.asarray(cs))
    y = np.log(np.asarray(ys))
    coef = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((np.polyval(coef, x) - y) ** 2)))
    return {
        "slope": float(coef[0]),
        "intercept": float(coef[1]),
        "residual": resid,
        "flagged": bool(resid > FIT_RESIDUAL_FLAG),
        "points": len(cs),
    }


def _asymptotic_subset(cs, ys):
    """Drop the largest two masses (the laws are c -> 0 statements)."""
    if len(cs) > 4:
        return cs[:-2], ys[:-2]
    return cs, ys


def run_sweep(spec: SweepSpec) -> SweepReport:
    """Run the sweep for the sign regime in ``spec`` and fit the scaling laws.

    gamma > 0, a > 0: both branches per mass.  gamma > 0, a < 0: the global
    minimizer per mass.  gamma < 0: dispatches the non-existence probe once
    (per-mass solving is meaningless without critical points).  Per-mass
    solver failures are recorded and the sweep continues.
    """
    if spec.c_as_fraction and spec.a <= 0:
        raise ValueError("c_as_fraction needs the two-branch regime (a > 0)")
    g = make_grid(spec.grid_n, spec.grid_r_max, spec.grid_spacing)
    template = ProblemParams(spec.gamma, spec.a, spec.p, 1.0)

    if spec.gamma < 0:
        probe = nonexistence_probe(template, None, trials=100) if spec.a < 0 else None
        if probe is None:
            K_GN = sharp_kgn(spec.p, g)
            sc = thresholds(ProblemParams(1.0, spec.a, spec.p, 1.0), K_GN, sharp_kh(g))
            probe = nonexistence_probe(template, sc, grid=g)
        return SweepReport(spec=asdict(spec), constants={}, records=[probe],
                           fits={}, monotonicity={})

    K_H = sharp_kh(g)
    K_GN = sharp_kgn(spec.p, g)
    if spec.a > 0:
        sc = thresholds(template, K_GN, K_H)
        const_rec = asdict(sc)
    else:
        sc = None
        const_rec = {"K_GN": K_GN, "K_H": K_H}

    if spec.c_values is None:
        if sc is None:
            cs = list(np.logspace(np.log10(0.5), np.log10(4.0), SWEEP_POINTS))
        else:
            cs = list(np.logspace(np.log10(SWEEP_C_LO * sc.c1),
                                  np.log10(SWEEP_C_HI * sc.c1), SWEEP_POINTS))
    elif spec.c_as_fraction:
        if sc is None:
            raise ValueError("c_as_fraction needs the two-branch regime (a > 0)")
        cs = [f * sc.c1 for f in spec.c_values]
    else:
        cs = list(spec.c_values)

    records = []
    failures = []
    for c in cs:
        params = ProblemParams(spec.gamma, spec.a, spec.p, c)
        rec = {"c": float(c)}
        if spec.a > 0:
            try:
                rp = solve_plus(params, sc, grid=g, max_iter=spec.max_iter)
                ep = energy_breakdown(rp.u, params)
                rec.update(gamma_plus=rp.energy, lambda_plus=rp.lam,
                           A_plus=ep.A, B_plus=ep.B, C_plus=ep.C,
                           converged_plus=rp.converged, q_rel_plus=rp.q_rel,
                           el_rel_plus=rp.el_rel)
            except SPSError as exc:
                rp = None
                rec["error_plus"] = f"{type(exc).__name__}: {exc}"
                failures.append({"c": float(c), "branch": "plus", "error": rec["error_plus"]})
            try:
                rm = solve_minus(params, sc, init=rp.u if rp is not None else None,
                                 grid=g, max_iter=spec.max_iter)
                em = energy_breakdown(rm.u, params)
                rec.update(gamma_minus=rm.energy, lambda_minus=rm.lam,
                           A_minus=em.A, B_minus=em.B, C_minus=em.C,
                           converged_minus=rm.converged, q_rel_minus=rm.q_rel,
                           el_rel_minus=rm.el_rel)
            except SPSError as exc:
                rec["error_minus"] = f"{type(exc).__name__}: {exc}"
                failures.append({"c": float(c), "branch": "minus", "error": rec["error_minus"]})
        else:
            try:
                rg = solve_global(params, grid=g, max_iter=spec.max_iter)
                eg = energy_breakdown(rg.u, params)
                rec.update(m=rg.energy, lam=rg.lam, A=eg.A, B=eg.B, C=eg.C,
                           converged=rg.converged, q_rel=rg.q_rel, el_rel=rg.el_rel)
            except SPSError as exc:
                rec["error"] = f"{type(exc).__name__}: {exc}"
                failures.append({"c": float(c), "branch": "global", "error": rec["error"]})
        records.append(rec)

    fits = {}
    monotonicity = {}
    if spec.a > 0:
        ok = [r for r in records if "gamma_plus" in r and "gamma_minus" in r]
        cs_ok = [r["c"] for r in ok]
        if len(ok) >= 3:
            ca, la = _asymptotic_subset(cs_ok, [r["lambda_plus"] for r in ok])
            fits["lambda_plus"] = _loglog_fit(ca, la)
            ca, ga = _asymptotic_subset(cs_ok, [abs(r["gamma_plus"]) for r in ok])
            fits["abs_gamma_plus"] = _loglog_fit(ca, ga)
            ca, lm = _asymptotic_subset(cs_ok, [r["lambda_minus"] for r in ok])
            fits["lambda_minus"] = _loglog_fit(ca, lm)
            if spec.p < 6.0:
                fits["lambda_minus"]["expected_slope"] = (
                    -(2.0 * spec.p - 4.0) / (3.0 * spec.p - 10.0))
            # pointwise bound constants (finiteness is the content)
            fits["lambda_plus_c2_bound"] = {
                "K": float(max(r["lambda_plus"] / r["c"] ** 2 for r in ok))}
            fits["abs_gamma_plus_c3_bound"] = {
                "K": float(max(abs(r["gamma_plus"]) / r["c"] ** 3 for r in ok))}
            if spec.p == 6.0:
                fits["lambda_minus_sqrtc_bound"] = {
                    "K": float(max(r["lambda_minus"] / np.sqrt(r["c"]) for r in ok))}
                fits["gamma_minus_limit"] = {
                    "smallest_c": ok[0]["c"],
                    "gamma_minus": ok[0]["gamma_minus"],
                    "crit_level": sc.crit_level,
                    "ratio": ok[0]["gamma_minus"] / sc.crit_level,
                }
        gm = [r["gamma_minus"] for r in records if "gamma_minus" in r]
        pairs = [bool(b < a) for a, b in zip(gm, gm[1:])]
        monotonicity["gamma_minus_decreasing_pairs"] = pairs
        monotonicity["gamma_minus_strictly_decreasing"] = bool(pairs and all(pairs))
    else:
        ok = [r for r in records if "m" in r]
        if len(ok) >= 3:
            cs_ok = [r["c"] for r in ok]
            fits["abs_m"] = _loglog_fit(cs_ok, [abs(r["m"]) for r in ok])
            # |m(c)| <= K1 c^3 + K2 c^{2p-3}: non-negative LSQ then scale to
            # enforce the bound pointwise
            carr = np.array(cs_ok)
            marr = np.array([abs(r["m"]) for r in ok])
            basis = np.column_stack([carr ** 3, carr ** (2.0 * spec.p - 3.0)])
            coef, _ = _nnls(basis, marr)
            bound = basis @ coef
            with np.errstate(divide="ignore"):
                scale = float(np.max(np.where(bound > 0, marr / bound, np.inf)))
            if not np.isfinite(scale):
                coef = np.array([float(np.max(marr / carr ** 3)), 0.0])
                scale = 1.0
            fits["m_two_term_bound"] = {
                "K1": float(coef[0] * scale), "K2": float(coef[1] * scale),
                "pointwise_ok": bool(np.all(marr <= (basis @ coef) * scale * (1 + 1e-12))),
            }
        ms = [r["m"] for r in records if "m" in r]
        monotonicity["m_decreasing_pairs"] = [bool(b < a) for a, b in zip(ms, ms[1:])]

    return SweepReport(spec=asdict(spec), constants=const_rec, records=records,
                       fits=fits, monotonicity=monotonicity, failures=failures)


def _nnls(basis, y):
    from scipy.optimize import nnls
    return nnls(basis, y)


def gamma_plus_continuity(params: ProblemParams, consts: SharpConstants, grid,
                          deltas=(0.04, 0.02, 0.01)) -> dict:
    """|gamma+(c + delta) - gamma+(c)| under delta-halving at fixed c.

    ``deltas`` are fractions of c.  Returns the gaps; continuity means the
    gap sequence decreases toward 0 with delta.
    """
    base = solve_plus(params, consts, grid=grid)
    gaps = []
    for d in deltas:
        pd = ProblemParams(params.gamma, params.a, params.p, params.c * (1.0 + d))
        rd = solve_plus(pd, consts, grid=grid)
        gaps.append(abs(rd.energy - base.energy))
    decreasing = all(b < a for a, b in zip(gaps, gaps[1:]))
    return {"c": params.c, "deltas": list(deltas), "gaps": gaps,
            "decreasing": bool(decreasing)}


def regime_table(configs, grid=None, consts_cache=None) -> list:
    """Dispatch each (gamma, a, p, c) to its predicted outcome and check it.

    Predictions: two branch solutions (gamma > 0, a > 0, c < c1), a global
    minimizer (gamma > 0, a < 0), no critical point at all (gamma < 0,
    a < 0), and no positive solution (gamma < 0, a > 0, p = 6).  Returns one
    row per config with predicted / observed / match.
    """
    g = grid if grid is not None else make_grid(1024, 40.0, "graded")
    cache = consts_cache if consts_cache is not None else {}
    rows = []
    for params in configs:
        gamma, a, p = params.gamma, params.a, params.p
        if gamma > 0 and a > 0:
            predicted = "two solutions"
            match = False
            key = ("consts", p, g.n)
            if key not in cache:
                cache[key] = thresholds(params, sharp_kgn(p, g), sharp_kh(g))
            sc = cache[key]
            try:
                rp = solve_plus(params, sc, grid=g)
                rm = solve_minus(params, sc, init=rp.u, grid=g)
                match = bool(rp.lam > 0 and rm.lam > 0 and rp.energy < rm.energy)
                observed = "two solutions" if match else "solver output off-pattern"
            except SPSError as exc:
                observed = f"failure: {type(exc).__name__}"
        elif gamma > 0 and a < 0:
            predicted = "global minimizer"
            match = False
            try:
                rg = solve_global(params, grid=g)
                match = bool(rg.energy < 0 and rg.lam > 0)
                observed = "global minimizer" if match else "solver output off-pattern"
            except SPSError as exc:
                observed = f"failure: {type(exc).__name__}"
        elif gamma < 0 and a < 0:
            predicted = "no critical point"
            probe = nonexistence_probe(params, None, trials=100, grid=g)
            match = bool(probe["monotone_fiber"])
            observed = "no critical point" if match else "fiber not monotone"
        elif gamma < 0 and a > 0 and p == 6.0:
            predicted = "no positive solution"
            key = ("consts", 6.0, g.n, "pos")
            if key not in cache:
                ref = ProblemParams(1.0, a, 6.0, params.c)
                cache[key] = thresholds(ref, sharp_kgn(6.0, g), sharp_kh(g))
            probe = nonexistence_probe(params, cache[key], grid=g, descent_iters=150,
                                       refine_sizes=(1024, 2048))
            match = bool(probe["ratio_to_crit"] >= 0.95 and probe["lambda_negative"])
            observed = ("no positive solution (evidence)" if match
                        else "probe found sub-critical energy")
        else:
            predicted = "unclassified sign pattern"
            observed = "skipped"
            match = True
        rows.append({
            "gamma": gamma, "a": a, "p": p, "c": params.c,
            "predicted": predicted, "observed": observed, "match": match,
        })
    return rows
