"""Truncated Aubin-Talenti bubbles and the two-profile interaction supremum.

The extremal U_eps(r) = xi(r) (3 eps^2)^{1/4} / (eps^2 + r^2)^{1/2} carries the
critical-exponent concentration behavior: as eps -> 0 its kinetic and sextic
terms approach the Sobolev ratio while the subcritical norms vanish at known
rates.  The interaction construction glues a bubble onto a local minimizer,

    w_{eps,t} = u_plus + t U_eps,   wbar(x) = sqrt(theta) w(theta x),

with theta^2 = ||w||_2^2 / c, so wbar sits exactly on the mass sphere; the
supremum of F(wbar) over t bounds the mountain-pass level strictly below the
compactness threshold.  Every quantity of wbar is evaluated by exact
polynomial algebra in t (no re-gridding), so the mass renormalization is
exact by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .energy import FOUR_PI, ProblemParams
from .errors import UnderResolved
from .grid import RadialFunction, RadialGrid

__all__ = ["Bubble", "make_bubble", "bubble_values", "verify_bubble_estimates", "interaction_sup"]

CUTOFF_SPEC = "quintic bridge on [1, 2]: xi=1 on B_1, xi=0 outside B_2, C^2 monotone"


def _smoothstep5(s: np.ndarray) -> np.ndarray:
    """Quintic smoothstep: 0 -> 1 on [0, 1] with two vanishing derivatives."""
    return 6.0 * s ** 5 - 15.0 * s ** 4 + 10.0 * s ** 3


def bubble_values(g: RadialGrid, eps: float) -> np.ndarray:
    """Value array of the truncated Aubin-Talenti profile (no validation)."""
    r = g.r
    xi = np.ones_like(r)
    mid = (r > 1.0) & (r < 2.0)
    xi[mid] = 1.0 - _smoothstep5(r[mid] - 1.0)
    xi[r >= 2.0] = 0.0
    return xi * (3.0 * eps ** 2) ** 0.25 / np.sqrt(eps ** 2 + r * r)


@dataclass(frozen=True)
class Bubble:
    """A truncated extremal: concentration scale, cutoff description, values."""

    epsilon: float
    cutoff: str
    values: RadialFunction


def make_bubble(epsilon: float, grid: RadialGrid) -> Bubble:
    """Build U_eps on the grid.

    Requires 1e-3 <= eps <= 1 and at least 8 grid nodes below eps so the
    concentration core is resolved (UnderResolved otherwise); the grid must
    also reach past the cutoff support r = 2.
    """
    if not (1e-3 <= epsilon <= 1.0):
        raise ValueError(f"epsilon must lie in [1e-3, 1], got {epsilon}")
    if grid.r_max < 2.0:
        raise UnderResolved(f"grid r_max={grid.r_max} does not cover the cutoff support r <= 2")
    if int(np.searchsorted(grid.r, epsilon)) < 8:
        raise UnderResolved(
            f"only {int(np.searchsorted(grid.r, epsilon))} nodes below eps={epsilon}; need >= 8"
        )
    return Bubble(
        epsilon=float(epsilon),
        cutoff=CUTOFF_SPEC,
        values=RadialFunction(grid, bubble_values(grid, epsilon)),
    )


def _lstsq_line(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float, float]:
    """Fit y = m x + b; return (m, b, m_stderr, b_stderr)."""
    coef, cov = np.polyfit(x, y, 1, cov=True)
    return coef[0], coef[1], float(np.sqrt(cov[0, 0])), float(np.sqrt(cov[1, 1]))


def verify_bubble_estimates(eps_list, grid: RadialGrid) -> dict:
    """Fit the small-eps expansion rates of the bubble family.

    Returns a dict with the extrapolated Sobolev-side limits of A and C
    (both linear-in-their-rate fits with intercept standard errors), the
    fitted power-law exponents of the L^2, L^3, and L^5 norms, and the
    per-eps raw values.  Requires at least three strictly decreasing eps.
    """
    eps = np.asarray(list(eps_list), dtype=float)
    if len(eps) < 3 or not np.all(np.diff(eps) < 0):
        raise ValueError("need at least 3 strictly decreasing eps values")
    rows = []
    for e in eps:
        u = bubble_values(grid, e)
        du = grid.derivative(u)
        A = FOUR_PI * grid.integrate(du * du)
        C = FOUR_PI * grid.integrate(u ** 6)
        q2 = FOUR_PI * grid.integrate(u ** 2)
        q3 = FOUR_PI * grid.integrate(u ** 3)
        q5 = FOUR_PI * grid.integrate(u ** 5)
        rows.append((e, A, C, q2, q3, q5))
    tab = np.array(rows)
    A, C, q2, q3, q5 = tab[:, 1], tab[:, 2], tab[:, 3], tab[:, 4], tab[:, 5]

    # A = A0 + O(eps): linear fit in eps.  C = C0 + O(eps^3): linear in eps^3.
    _, A0, _, A0_err = _lstsq_line(eps, A)
    _, C0, _, C0_err = _lstsq_line(eps ** 3, C)
    m2, _, m2_err, _ = _lstsq_line(np.log(eps), np.log(q2))
    m5, _, m5_err, _ = _lstsq_line(np.log(eps), np.log(q5))
    # ||U||_3^3 ~ omega eps^{3/2} |log eps|: unit slope of log(q3/eps^{3/2})
    # against log|log eps|.
    m3, _, m3_err, _ = _lstsq_line(np.log(np.abs(np.log(eps))), np.log(q3 / eps ** 1.5))

    return {
        "eps": eps.tolist(),
        "A": A.tolist(),
        "C": C.tolist(),
        "A_limit": float(A0),
        "A_limit_stderr": A0_err,
        "C_limit": float(C0),
        "C_limit_stderr": C0_err,
        "mass_exponent": float(m2),
        "mass_exponent_stderr": m2_err,
        "cubic_log_slope": float(m3),
        "cubic_log_slope_stderr": m3_err,
        "quintic_exponent": float(m5),
        "quintic_exponent_stderr": m5_err,
    }


def _interaction_polys(g: RadialGrid, u_plus: np.ndarray, U: np.ndarray):
    """Coefficients (ascending in t) of A, B, C, D for w = u_plus + t U, p = 6.

    A and D are quadratics, C is the binomial sextic (both profiles are
    non-negative, so |w|^6 = w^6), and B is the quartic assembled from the
    three Newton potentials of u^2, uU, U^2 via the symmetric pairing
    H[f, g] = int phi_f g.
    """
    du = g.derivative(u_plus)
    dU = g.derivative(U)

    def itg(f):
        return FOUR_PI * g.integrate(f)

    a_poly = np.array([itg(du * du), 2.0 * itg(du * dU), itg(dU * dU)])
    d_poly = np.array([itg(u_plus * u_plus), 2.0 * itg(u_plus * U), itg(U * U)])
    c_poly = np.array([comb(6, k) * itg(u_plus ** (6 - k) * U ** k) for k in range(7)])

    rho0, rhox, rhoU = u_plus * u_plus, u_plus * U, U * U
    ph0, phx, phU = g.poisson(rho0), g.poisson(rhox), g.poisson(rhoU)

    def H(pa, rb):
        return itg(pa * rb)

    b_poly = np.array([
        H(ph0, rho0),
        4.0 * H(ph0, rhox),
        2.0 * H(ph0, rhoU) + 4.0 * H(phx, rhox),
        4.0 * H(phx, rhoU),
        H(phU, rhoU),
    ])
    return a_poly, b_poly, c_poly, d_poly


def interaction_sup(
    params: ProblemParams,
    u_plus,
    epsilon: float,
    t_grid=None,
) -> tuple[float, float]:
    """Supremum over t of F(wbar_{eps,t}) for the glued family at p = 6.

    ``u_plus`` is a converged local-minimizer branch result (or any object
    with a ``u`` attribute holding a RadialFunction, or a RadialFunction
    itself) at the same (gamma, a, c).  The default t grid is 200 log-spaced
    points on [1e-2, 1e2], refined by golden-section search around the
    coarse argmax; the supremum is interior for small eps.

    Returns (sup_F, argmax_t).
    """
    if params.p != 6.0:
        raise ValueError("the interaction construction is specific to p = 6")
    uf = getattr(u_plus, "u", u_plus)
    g = uf.grid
    U = make_bubble(epsilon, g).values.values
    ap, bp, cp, dp = _interaction_polys(g, uf.values, U)
    gamma, a, c = params.gamma, params.a, params.c

    def F_of_t(t):
        tA = np.polyval(ap[::-1], t)
        tB = np.polyval(bp[::-1], t)
        tC = np.polyval(cp[::-1], t)
        tD = np.polyval(dp[::-1], t)
        theta = np.sqrt(tD / c)
        return 0.5 * tA - gamma * theta ** -3 * tB / 4.0 - a * tC / 6.0

    if t_grid is None:
        ts = np.logspace(-2, 2, 200)
    else:
        ts = np.asarray(list(t_grid), dtype=float)
    vals = np.array([F_of_t(t) for t in ts])
    k = int(np.argmax(vals))
    lo = ts[max(k - 1, 0)]
    hi = ts[min(k + 1, len(ts) - 1)]
    gr = (np.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - gr * (hi - lo)
    x2 = lo + gr * (hi - lo)
    f1, f2 = F_of_t(x1), F_of_t(x2)
    for _ in range(80):
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + gr * (hi - lo)
            f2 = F_of_t(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - gr * (hi - lo)
            f1 = F_of_t(x1)
    t_best = 0.5 * (lo + hi)
    f_best = F_of_t(t_best)
    if f_best >= vals[k]:
        return float(f_best), float(t_best)
    return float(vals[k]), float(ts[k])
