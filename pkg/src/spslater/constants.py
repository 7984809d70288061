"""Sharp inequality constants and the derived mass/kinetic thresholds.

Two interpolation inequalities control the energy landscape:

    Hartree:              B(u) <= K_H  A(u)^{1/2} D(u)^{3/2}
    Gagliardo-Nirenberg:  C(u) <= K_GN A(u)^{sigma/2} D(u)^{(6-p)/4}

The sharp constants are found by maximizing the corresponding scale-invariant
quotients.  From them the closed formulas below produce the admissible mass
threshold c1 and the kinetic gate constants k0, k1 that separate the two
solution branches, plus the critical energy level for p = 6.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .bubbles import bubble_values
from .energy import FOUR_PI, ProblemParams
from .errors import NonConvergence
from .grid import RadialGrid

__all__ = ["SharpConstants", "sharp_kgn", "sharp_kh", "thresholds", "critical_level", "json_record"]


@dataclass(frozen=True)
class SharpConstants:
    """Sharp constants and thresholds; crit_level is set only for p = 6."""

    K_GN: float
    K_H: float
    c1: float
    M: float
    N: float
    k0: float
    k1: float
    crit_level: float | None = None


def _ground_state(g: RadialGrid, nonlinearity, power, u0, max_iter=500, tol=1e-12):
    """Positive radial ground state of -Lap(u) + u = N(u) on the grid.

    Petviashvili renormalization: each step solves the shifted Laplacian
    implicitly, w = (I - Lap)^{-1} N(u), and rescales by S^{q/(q-1)} with
    S = (A + D) / <u, N(u)> and q the homogeneity degree of N.  The factor
    damps the amplitude mode that makes plain fixed-point iteration diverge,
    and the scheme contracts onto the single-hump ground state from any
    reasonable positive seed.  Stops when the profile settles in relative
    L2 distance.
    """
    u = u0.copy()
    gamma = power / (power - 1.0)
    for it in range(max_iter):
        nu_val = nonlinearity(u)
        du = g.derivative(u)
        A = FOUR_PI * g.integrate(du * du)
        D = FOUR_PI * g.integrate(u * u)
        P = FOUR_PI * g.integrate(u * nu_val)
        if not (np.isfinite(P) and P > 0.0):
            raise NonConvergence("renormalized iteration left the positive cone")
        S = (A + D) / P
        un = S ** gamma * g.implicit_heat_solve(nu_val, 1.0)
        delta = np.sqrt(FOUR_PI * g.integrate((un - u) ** 2) / max(D, 1e-300))
        u = un
        if delta < tol:
            return u
    raise NonConvergence(
        f"ground-state iteration did not settle in {max_iter} steps")


def sharp_kh(grid: RadialGrid, return_profile: bool = False):
    """Sharp Hartree interpolation constant sup B / (A^{1/2} D^{3/2}).

    The quotient is invariant under dilation and amplitude scaling, and its
    supremum is attained at the Choquard ground state
    -Lap(w) + w = (|x|^{-1} * w^2) w, computed here by renormalized
    fixed-point iteration from a Gaussian seed.  The converged profile obeys
    B = 4A and D = 3A (multiply the equation by w, respectively apply the
    dilation identity), which pins K_H = 4 / (3^{3/2} A); the value is
    nevertheless read off the quotient directly so that discretization
    errors in numerator and denominator cancel the same way they do for the
    trial profiles the constant is compared against.
    """
    g = grid

    def nonlin(u):
        return g.poisson(u * u) * u

    u = _ground_state(g, nonlin, 3.0, np.exp(-g.r ** 2))
    du = g.derivative(u)
    A = FOUR_PI * g.integrate(du * du)
    rho = u * u
    B = FOUR_PI * g.integrate(g.poisson(rho) * rho)
    D = FOUR_PI * g.integrate(rho)
    K = float(B / (np.sqrt(A) * D ** 1.5))
    return (K, u) if return_profile else K


def sharp_kgn(p: float, grid: RadialGrid, return_profile: bool = False):
    """Sharp Gagliardo-Nirenberg constant sup C / (A^{sigma/2} D^{(6-p)/4}).

    Subcritical p < 6: the supremum is attained at the ground state of
    -Lap(w) + w = |w|^{p-2} w, computed by renormalized fixed-point
    iteration from a Gaussian; the quotient is then evaluated on the
    converged profile.  Critical p = 6: maximizing sequences concentrate,
    so the constant is S^{-3} with S the best Sobolev ratio A/C^{1/3},
    evaluated on truncated Aubin-Talenti profiles and extrapolated to zero
    bubble width by a quadratic fit in epsilon over {0.05, 0.025, 0.0125}.
    """
    if not (10.0 / 3.0 < p <= 6.0):
        raise ValueError(f"p must lie in (10/3, 6], got {p}")
    g = grid
    if p == 6.0:
        eps_list = (0.05, 0.025, 0.0125)
        ks = []
        for eps in eps_list:
            u = bubble_values(g, eps)
            du = g.derivative(u)
            A = FOUR_PI * g.integrate(du * du)
            C = FOUR_PI * g.integrate(u ** 6)
            ks.append(C / A ** 3)
        coef = np.linalg.lstsq(np.vander(np.asarray(eps_list), 3), np.asarray(ks), rcond=None)[0]
        K = float(coef[-1])
        if return_profile:
            return K, bubble_values(g, eps_list[-1])
        return K

    sigma = 1.5 * (p - 2.0)

    def nonlin(u):
        return np.abs(u) ** (p - 2.0) * u

    u = _ground_state(g, nonlin, p - 1.0, np.exp(-g.r ** 2))
    du = g.derivative(u)
    A = FOUR_PI * g.integrate(du * du)
    C = FOUR_PI * g.integrate(np.abs(u) ** p)
    D = FOUR_PI * g.integrate(u * u)
    K = float(C / (A ** (0.5 * sigma) * D ** (0.25 * (6.0 - p))))
    return (K, u) if return_profile else K


def critical_level(a: float, K_GN: float) -> float:
    """Energy level 1/(3 sqrt(a K_GN)) below which p = 6 compactness holds."""
    if not (a > 0 and K_GN > 0):
        raise ValueError("critical level needs a > 0 and K_GN > 0")
    return 1.0 / (3.0 * np.sqrt(a * K_GN))


def thresholds(params: ProblemParams, K_GN: float, K_H: float) -> SharpConstants:
    """Assemble the threshold constants from the closed formulas.

    M  = p / (a sigma (sigma-1) K_GN)
    N  = 4 (sigma-2) / (gamma (sigma-1) K_H)
    k0 = N^{-2},   c1 = N^{(3p-10)/(4(p-3))} M^{1/(2(p-3))},   k1 = k0 c1^3

    All outputs are positive, which requires gamma > 0 and a > 0.
    """
    if not (K_GN > 0 and K_H > 0):
        raise ValueError("sharp constants must be positive")
    if not (params.gamma > 0 and params.a > 0):
        raise ValueError("thresholds are defined for gamma > 0 and a > 0")
    p, sigma = params.p, params.sigma
    M = p / (params.a * sigma * (sigma - 1.0) * K_GN)
    N = 4.0 * (sigma - 2.0) / (params.gamma * (sigma - 1.0) * K_H)
    k0 = N ** -2.0
    c1 = N ** ((3.0 * p - 10.0) / (4.0 * (p - 3.0))) * M ** (1.0 / (2.0 * (p - 3.0)))
    k1 = k0 * c1 ** 3
    crit = critical_level(params.a, K_GN) if p == 6.0 else None
    return SharpConstants(K_GN=K_GN, K_H=K_H, c1=c1, M=M, N=N, k0=k0, k1=k1, crit_level=crit)


def json_record(params: ProblemParams, sc: SharpConstants) -> dict:
    """Constants as a JSON-ready record keyed by the (gamma, a, p) triple."""
    key = f"gamma={params.gamma:g},a={params.a:g},p={params.p:g}"
    return {key: asdict(sc)}
