"""Energy terms, constrained gradient, multiplier formulas, Pohozaev residuals.

Notation used throughout the package, for a radial profile u on [0, R]:

    A = ||grad u||_2^2          (kinetic)
    B = int phi_u u^2           (Hartree double integral, phi_u the Newton
                                 potential of u^2)
    C = int |u|^p               (power)
    D = ||u||_2^2               (mass)

    F = A/2 - gamma*B/4 - a*C/p          (energy)
    Q = A - gamma*B/4 - a*sigma*C/p      (Pohozaev functional, sigma = 3(p-2)/2)

All integrals carry the 4*pi angular factor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import RadialFunction, RadialGrid

__all__ = [
    "ProblemParams",
    "EnergyBreakdown",
    "energy_breakdown",
    "h1_gradient",
    "lagrange_multiplier",
    "pohozaev_residual",
]

FOUR_PI = 4.0 * np.pi


@dataclass(frozen=True)
class ProblemParams:
    """Coefficients (gamma, a), exponent p in (10/3, 6], and mass c > 0."""

    gamma: float
    a: float
    p: float
    c: float

    def __post_init__(self):
        if not (10.0 / 3.0 < self.p <= 6.0):
            raise ValueError(f"p must lie in (10/3, 6], got {self.p}")
        if not self.c > 0:
            raise ValueError(f"mass c must be positive, got {self.c}")

    @property
    def sigma(self) -> float:
        """Dilation exponent of the power term, sigma = 3(p-2)/2 in (2, 6]."""
        return 1.5 * (self.p - 2.0)


@dataclass(frozen=True)
class EnergyBreakdown:
    """The four integral terms plus the derived energy and Pohozaev values."""

    A: float
    B: float
    C: float
    D: float
    F: float
    Q: float


def _power_density(u: np.ndarray, p: float) -> np.ndarray:
    """|u|^{p-2} u with the continuous extension 0 at u = 0 (needed for p < 4)."""
    return np.sign(u) * np.abs(u) ** (p - 1.0)


def _terms(g: RadialGrid, u: np.ndarray, p: float):
    """Raw A, B, C, D for a value array (inner-loop form)."""
    du = g.derivative(u)
    A = FOUR_PI * g.integrate(du * du)
    phi = g.poisson(u * u)
    B = FOUR_PI * g.integrate(phi * u * u)
    C = FOUR_PI * g.integrate(np.abs(u) ** p)
    D = FOUR_PI * g.integrate(u * u)
    return A, B, C, D, phi


def energy_breakdown(u: RadialFunction, params: ProblemParams) -> EnergyBreakdown:
    """Evaluate A, B, C, D and assemble F and Q for the given parameters."""
    A, B, C, D, _ = _terms(u.grid, u.values, params.p)
    F = 0.5 * A - 0.25 * params.gamma * B - params.a * C / params.p
    Q = A - 0.25 * params.gamma * B - params.a * params.sigma * C / params.p
    return EnergyBreakdown(A=A, B=B, C=C, D=D, F=F, Q=Q)


def h1_gradient(u: RadialFunction, params: ProblemParams) -> RadialFunction:
    """Unconstrained energy gradient g = -Lap u - gamma phi_u u - a |u|^{p-2} u.

    For a constrained critical point with multiplier lambda, g + lambda u = 0.
    The directional derivative of F at u along v equals the L^2 pairing
    4 pi int g v r^2 dr.
    """
    g = u.grid
    vals = u.values
    phi = g.poisson(vals * vals)
    out = (
        -g.apply_laplacian(vals)
        - params.gamma * phi * vals
        - params.a * _power_density(vals, params.p)
    )
    out[-1] = 0.0
    return RadialFunction(g, out)


def lagrange_multiplier(u: RadialFunction, params: ProblemParams, corrected: bool = False) -> float:
    """Multiplier lambda = -(A - gamma B - a C)/c.

    With ``corrected=True``, return the algebraically equivalent-at-Q=0 form

        lambda = [ (3 gamma/4) B + a (1 - sigma/p) C ] / c,

    which subtracts the Pohozaev defect Q/c and is the form reported for
    solver output (for p = 6 the power term drops out identically).
    The two forms differ by exactly -Q(u)/c.
    """
    e = energy_breakdown(u, params)
    if corrected:
        return (0.75 * params.gamma * e.B + params.a * (1.0 - params.sigma / params.p) * e.C) / params.c
    return -(e.A - params.gamma * e.B - params.a * e.C) / params.c


def pohozaev_residual(u: RadialFunction, lam: float, params: ProblemParams) -> tuple[float, float]:
    """Relative residuals (q_rel, eq_rel), both normalized by A(u).

    q_rel  : |Q(u)| / A
    eq_rel : |2(6-p) A + (5p-12) gamma B - 2(3p-6) lambda D| / A
             (for p = 6 the first term vanishes and the identity reduces to
             18 gamma B = 24 lambda D)

    The normalization uses A rather than F because F can sit near zero on the
    local-minimizer branch.  A zero profile returns (0, 0).
    """
    if not np.isfinite(lam):
        raise ValueError("lambda must be finite")
    e = energy_breakdown(u, params)
    if e.A == 0.0:
        return 0.0, 0.0
    p = params.p
    eq = 2.0 * (6.0 - p) * e.A + (5.0 * p - 12.0) * params.gamma * e.B - 2.0 * (3.0 * p - 6.0) * lam * e.D
    return abs(e.Q) / e.A, abs(eq) / e.A
