"""Normalized solutions of the Schroedinger-Poisson-Slater equation.

Radial variational solver for

    -Delta u + lambda u - gamma (|x|^-1 * |u|^2) u - a |u|^(p-2) u = 0

on R^3 under the mass constraint ||u||_2^2 = c, with 10/3 < p <= 6.  The
package computes the two constrained branches (a local minimizer and a
mountain-pass solution) when gamma > 0 and a > 0, the global minimizer when
a < 0, the sharp interpolation constants and the thresholds they induce, and
numerical evidence for the non-existence regimes.
"""

from .errors import (
    BoundaryStall,
    BubbleEscape,
    ConfigError,
    DegenerateFiber,
    NonConvergence,
    SPSError,
    UnderResolved,
)
from .grid import (
    RadialFunction,
    RadialGrid,
    make_grid,
    poisson_potential,
    rescale_fiber,
)
from .energy import (
    EnergyBreakdown,
    ProblemParams,
    energy_breakdown,
    h1_gradient,
    lagrange_multiplier,
    pohozaev_residual,
)
from .constants import (
    SharpConstants,
    critical_level,
    sharp_kgn,
    sharp_kh,
    thresholds,
)
from .fiber import (
    FiberProfile,
    fiber_from_triple,
    fiber_profile,
    lambda_zero_probe,
    reduced_I,
)
from .bubbles import (
    Bubble,
    interaction_sup,
    make_bubble,
    verify_bubble_estimates,
)
from .solvers import (
    BranchResult,
    newton_polish,
    nonexistence_probe,
    solve_global,
    solve_minus,
    solve_plus,
)
from .sweep import (
    SweepReport,
    SweepSpec,
    gamma_plus_continuity,
    regime_table,
    run_sweep,
)
from .acceptance import build_context, run_acceptance

__version__ = "0.1.0"

__all__ = [
    "SPSError", "DegenerateFiber", "UnderResolved", "BoundaryStall",
    "NonConvergence", "BubbleEscape", "ConfigError",
    "RadialGrid", "RadialFunction", "make_grid", "poisson_potential",
    "rescale_fiber",
    "ProblemParams", "EnergyBreakdown", "energy_breakdown", "h1_gradient",
    "lagrange_multiplier", "pohozaev_residual",
    "SharpConstants", "sharp_kh", "sharp_kgn", "critical_level", "thresholds",
    "FiberProfile", "fiber_profile", "fiber_from_triple", "reduced_I",
    "lambda_zero_probe",
    "Bubble", "make_bubble", "verify_bubble_estimates", "interaction_sup",
    "BranchResult", "solve_plus", "solve_minus", "solve_global",
    "newton_polish", "nonexistence_probe",
    "SweepSpec", "SweepReport", "run_sweep", "gamma_plus_continuity",
    "regime_table",
    "build_context", "run_acceptance",
    "__version__",
]
