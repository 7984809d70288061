"""Fiber-map algebra along the mass-preserving dilations u^t = t^{3/2} u(tx).

Along the fiber the energy is an explicit scalar function of t,

    g(t) = t^2 A/2 - gamma t B/4 - a t^sigma C/p,

so every question about critical dilations reduces to root-finding on the
invariant triple (A, B, C): the inflection t* = (pA/(a sigma(sigma-1)C))^{1/(sigma-2)}
is the unique zero of g'', and when g'(t*) > 0 the derivative g' has exactly
two positive zeros s_plus < t* < s_minus (a local minimum and maximum of g).
All arithmetic here runs on the triple -- never on resampled grids -- because
the scaling laws A -> t^2 A, B -> t B, C -> t^sigma C are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .energy import ProblemParams, energy_breakdown
from .errors import DegenerateFiber
from .grid import RadialFunction, make_grid

__all__ = [
    "FiberProfile",
    "fiber_from_triple",
    "fiber_profile",
    "reduced_I",
    "lambda_zero_probe",
]

ROOT_TOL = 1e-10  # |g'(s)| <= ROOT_TOL * A at returned roots
CLASS_TOL = 1e-6  # |g'(1)| <= CLASS_TOL * A to sit on the constraint manifold


@dataclass
class FiberProfile:
    """The dilation landscape of one profile.

    ``shape`` records the sign regime: "two_roots" (gamma > 0, a > 0,
    non-degenerate), "single_max" (a > 0, gamma <= 0), "single_min"
    (a <= 0, gamma > 0), or "monotone" (a <= 0, gamma <= 0, g' > 0).
    ``classification`` is where u itself (t = 1) sits: LambdaPlus /
    LambdaZero / LambdaMinus when g'(1) vanishes to tolerance, else
    NotOnLambda.
    """

    A: float
    B: float
    C: float
    t_star: float | None
    s_plus: float | None
    s_minus: float | None
    shape: str
    classification: str
    g_at: Callable[[float], float]
    gprime_at: Callable[[float], float]


def _root_on_bracket(gp, gpp, lo, hi, scale):
    """Root of gp on [lo, hi] (sign change assumed): bisection then Newton."""
    flo = gp(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = gp(mid)
        if flo * fm <= 0.0:
            hi = mid
        else:
            lo, flo = mid, fm
        if hi - lo < 1e-13 * max(1.0, hi):
            break
    s = 0.5 * (lo + hi)
    for _ in range(60):
        f = gp(s)
        if abs(f) <= ROOT_TOL * scale:
            return s
        d = gpp(s)
        if d == 0.0:
            break
        step = f / d
        s_new = s - step
        if not (lo <= s_new <= hi):
            s_new = 0.5 * (lo + hi)
        s = s_new
    return s


def fiber_from_triple(A: float, B: float, C: float, params: ProblemParams) -> FiberProfile:
    """Fiber landscape from the invariant triple (A, B, C)."""
    gamma, a, p, sigma = params.gamma, params.a, params.p, params.sigma

    def g_at(t):
        return 0.5 * t * t * A - 0.25 * gamma * t * B - a * t ** sigma * C / p

    def gp(t):
        return t * A - 0.25 * gamma * B - a * sigma * t ** (sigma - 1.0) * C / p

    def gpp(t):
        return A - a * sigma * (sigma - 1.0) * t ** (sigma - 2.0) * C / p

    t_star = None
    s_plus = None
    s_minus = None

    if a > 0 and C > 0 and A > 0:
        t_star = (p * A / (a * sigma * (sigma - 1.0) * C)) ** (1.0 / (sigma - 2.0))

    if gamma > 0 and a > 0:
        shape = "two_roots"
        if t_star is None:
            raise DegenerateFiber(t_star=0.0, gprime_at_tstar=-np.inf,
                                  message="vanishing kinetic or power term")
        gpt = gp(t_star)
        if gpt <= 0.0:
            raise DegenerateFiber(t_star=t_star, gprime_at_tstar=gpt)
        # s_plus in (0, t*): g' < 0 near 0 (the -gamma B/4 term dominates)
        lo = t_star
        while gp(lo) > 0.0:
            lo *= 0.5
            if lo < 1e-300:
                raise DegenerateFiber(t_star=t_star, gprime_at_tstar=gpt,
                                      message="no sign change below t*")
        s_plus = _root_on_bracket(gp, gpp, lo, t_star, A)
        # s_minus in (t*, inf): double from 2 t* until g' < 0
        hi = 2.0 * t_star
        while gp(hi) > 0.0:
            hi *= 2.0
        s_minus = _root_on_bracket(lambda t: -gp(t), lambda t: -gpp(t), t_star, hi, A)
    elif gamma <= 0 and a > 0:
        # g'(0+) = -gamma B/4 >= 0, eventually negative: single maximum
        shape = "single_max"
        hi = max(1.0, 2.0 * (t_star or 1.0))
        while gp(hi) > 0.0:
            hi *= 2.0
        lo = hi
        while gp(lo) <= 0.0:
            lo *= 0.5
            if lo < 1e-300:
                break
        s_minus = _root_on_bracket(lambda t: -gp(t), lambda t: -gpp(t), lo, hi, A)
    elif gamma > 0 and a <= 0:
        # g' strictly increasing from -gamma B/4 < 0: single minimum
        shape = "single_min"
        hi = 1.0
        while gp(hi) < 0.0:
            hi *= 2.0
        lo = hi / 2.0
        while gp(lo) > 0.0:
            lo *= 0.5
        s_plus = _root_on_bracket(gp, gpp, lo, hi, A)
    else:
        shape = "monotone"  # g' = tA + |gamma| B/4 + |a| ... > 0 for t > 0

    gp1 = gp(1.0)
    tol = CLASS_TOL * A
    if abs(gp1) > tol:
        classification = "NotOnLambda"
    else:
        gpp1 = gpp(1.0)
        if gpp1 > tol:
            classification = "LambdaPlus"
        elif gpp1 < -tol:
            classification = "LambdaMinus"
        else:
            classification = "LambdaZero"

    return FiberProfile(A=A, B=B, C=C, t_star=t_star, s_plus=s_plus, s_minus=s_minus,
                        shape=shape, classification=classification,
                        g_at=g_at, gprime_at=gp)


def fiber_profile(u: RadialFunction, params: ProblemParams) -> FiberProfile:
    """Fiber landscape of a gridded profile (triple computed by quadrature)."""
    e = energy_breakdown(u, params)
    return fiber_from_triple(e.A, e.B, e.C, params)


def reduced_I(u: RadialFunction, branch: str, params: ProblemParams) -> float:
    """Reduced functionals I+(u) = F(u^{s+}), I-(u) = F(u^{s-})."""
    prof = fiber_profile(u, params)
    if branch == "plus":
        s = prof.s_plus
    elif branch == "minus":
        s = prof.s_minus
    else:
        raise ValueError(f"branch must be 'plus' or 'minus', got {branch!r}")
    if s is None:
        raise DegenerateFiber(t_star=prof.t_star or 0.0, gprime_at_tstar=np.nan,
                              message=f"no {branch} dilation in shape {prof.shape}")
    return float(prof.g_at(s))


def _random_profile(g, rng):
    """Smooth random radial profile: a few Gaussian humps with varied widths."""
    r = g.r
    u = np.zeros_like(r)
    for _ in range(rng.integers(1, 4)):
        amp = rng.uniform(0.2, 1.5)
        width = rng.uniform(0.3, 3.0)
        center = rng.uniform(0.0, 3.0)
        u += amp * np.exp(-((r - center) / width) ** 2)
    u[-1] = 0.0
    return u


def lambda_zero_probe(params: ProblemParams, samples: int, grid=None, seed: int = 0) -> dict:
    """Sample random mass-c profiles and measure the sign of g' at the inflection.

    For gamma > 0, a > 0 (and c < c1) every sample must give g'(t*) > 0 --
    the constraint manifold has no degenerate fiber points.  For a <= 0
    regimes there is no inflection; the probe instead reports the minimum of
    g' over a logarithmic t grid (monotone fibers stay positive).  Values are
    normalized by sqrt(A) for scale-free comparison across samples.
    """
    g = grid if grid is not None else make_grid(512, 40.0, "graded")
    rng = np.random.default_rng(seed)
    metrics = []
    for _ in range(samples):
        u = _random_profile(g, rng)
        mass = g.norm2_sq(u)
        u = u * np.sqrt(params.c / mass)
        prof = fiber_profile(RadialFunction(g, u), params)
        if prof.t_star is not None and params.a > 0:
            val = prof.gprime_at(prof.t_star)
        else:
            ts = np.logspace(-2, 2, 100)
            val = min(prof.gprime_at(t) for t in ts)
        metrics.append(val / np.sqrt(prof.A))
    metrics = np.asarray(metrics)
    return {
        "c": params.c,
        "samples": samples,
        "min_normalized_gprime": float(metrics.min()),
        "all_positive": bool(np.all(metrics > 0.0)),
    }
