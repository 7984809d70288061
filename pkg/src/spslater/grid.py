"""Radial grids, quadrature, differentiation, and the Newton-theorem Poisson solve.

Everything in the package evaluates radial profiles u(r) on a truncated domain
[0, R_max] with a Dirichlet condition u(R_max) = 0.  Grid nodes exclude r = 0
(the cell [0, r_0) is handled by a monomial stub) so that quadrature weights,
which absorb the r^2 volume Jacobian, stay strictly positive.  Integrals are

    integrate(f) ~ int_0^R f(r) r^2 dr = sum_i w_i f_i,

and L^2-type quantities carry the 4*pi angular factor at the call site.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.linalg import solve_banded


__all__ = ["RadialGrid", "RadialFunction", "make_grid", "poisson_potential", "rescale_fiber"]


def _simpson_chain_weights(m: int) -> np.ndarray:
    """Composite Simpson weights for m equally spaced nodes (unit spacing).

    When the interval count m-1 is odd, the last three intervals use the
    Simpson 3/8 rule so the full chain keeps 4th-order accuracy.  All weights
    are positive.
    """
    if m < 4:
        raise ValueError("need at least 4 quadrature nodes")
    w = np.zeros(m)
    intervals = m - 1
    if intervals % 2 == 0:
        w[0] = w[-1] = 1.0 / 3.0
        w[1:-1:2] = 4.0 / 3.0
        w[2:-1:2] = 2.0 / 3.0
    else:
        k = m - 3  # Simpson up to node k-1, 3/8 on the last three intervals
        w[0] = w[k - 1] = 1.0 / 3.0
        w[1:k - 1:2] = 4.0 / 3.0
        w[2:k - 1:2] = 2.0 / 3.0
        w[k - 1] += 3.0 / 8.0
        w[k] = w[k + 1] = 9.0 / 8.0
        w[k + 2] = 3.0 / 8.0
    return w


def _fornberg(z: float, x: np.ndarray, m: int) -> np.ndarray:
    """Finite-difference weights at point z on nodes x for the m-th derivative."""
    n = len(x)
    c = np.zeros((n, m + 1))
    c1 = 1.0
    c4 = x[0] - z
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, m)
        c2 = 1.0
        c5 = c4
        c4 = x[i] - z
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, m]


@dataclass
class RadialGrid:
    """Nodes, weights, and discrete operators for radial profiles.

    Attributes
    ----------
    n : node count
    r_max : truncation radius
    spacing : "uniform" or "graded" (graded clusters nodes near the origin,
        r_i proportional to ((i+1)/n)^2 * r_max)
    r : nodes, strictly increasing, r[0] > 0, r[-1] = r_max
    w : quadrature weights for int_0^R f r^2 dr, all positive
    """

    n: int
    r_max: float
    spacing: str
    r: np.ndarray
    w: np.ndarray
    _d1: tuple | None = field(default=None, repr=False)
    _lap: tuple | None = field(default=None, repr=False)

    # -- integration ------------------------------------------------------

    def integrate(self, f: np.ndarray) -> float:
        """int_0^R f(r) r^2 dr by the grid's positive-weight rule."""
        return float(np.dot(self.w, f))

    def norm2_sq(self, u: np.ndarray) -> float:
        """||u||_2^2 = 4 pi int u^2 r^2 dr."""
        return 4.0 * np.pi * self.integrate(u * u)

    # -- differentiation ---------------------------------------------------

    def _build_d1(self):
        re = np.concatenate(([-self.r[1], -self.r[0]], self.r))
        n = self.n
        W = np.empty((n, 5))
        idx = np.empty((n, 5), dtype=np.int64)
        for i in range(n):
            j = i + 2  # position in re
            lo = max(0, min(j - 2, n - 3))
            cols = np.arange(lo, lo + 5)
            W[i] = _fornberg(self.r[i], re[cols], 1)
            idx[i] = cols
        self._d1 = (W, idx)

    def derivative(self, u: np.ndarray) -> np.ndarray:
        """du/dr via sliding 5-point stencils with even extension through r=0."""
        if self._d1 is None:
            self._build_d1()
        W, idx = self._d1
        ue = np.concatenate(([u[1], u[0]], u))
        return (W * ue[idx]).sum(axis=1)

    # -- Laplacian (radial, in v = r u coordinates) ------------------------

    def _build_lap(self):
        """5-point operator for v'' on the extended node set, plus its banded
        form for the unknowns v_0..v_{n-2} (v(0)=0 and v(R)=0 are exact)."""
        n = self.n
        re = np.concatenate(([-self.r[1], -self.r[0], 0.0], self.r))
        W = np.zeros((n, 5))
        pos = np.empty(n, dtype=np.int64)  # leftmost extended index of each stencil
        for i in range(n - 1):
            j = i + 3
            if i <= n - 4:
                lo = j - 2
            else:
                lo = n - 2  # shifted near the right edge
            W[i] = _fornberg(self.r[i], re[lo:lo + 5], 2)
            pos[i] = lo
        # last interior row n-2: 4-point one-sided stencil keeps bandwidth (2,2)
        i = n - 2
        lo = n - 1  # extended indices n-1..n+2 -> r-nodes n-4..n-1
        W[i, :4] = _fornberg(self.r[i], re[lo:lo + 4], 2)
        pos[i] = lo
        pos[n - 1] = 3  # unused (Dirichlet row)

        self._lap_app = (W, pos, re)

        # banded form: columns are v-unknowns 0..n-2 (r-node k <-> column k)
        m = n - 1
        ab = np.zeros((5, m))
        for i in range(m):
            lo = pos[i]
            for s in range(5):
                wgt = W[i, s]
                if wgt == 0.0:
                    continue
                e = lo + s
                if e == 2:
                    continue  # v(0) = 0
                if e < 2:
                    k = 1 - e  # odd reflection: v(-r_k) = -v(r_k)
                    sign = -1.0
                else:
                    k = e - 3
                    sign = 1.0
                if k >= m:
                    continue  # v(R) = 0
                ab[2 + i - k, k] += sign * wgt
        self._lap = ab

    def apply_laplacian(self, u: np.ndarray) -> np.ndarray:
        """Radial Laplacian u'' + (2/r) u' computed as (r u)''/r."""
        if self._lap is None:
            self._build_lap()
        W, pos, _ = self._lap_app
        v = self.r * u
        ve = np.concatenate(([-v[1], -v[0], 0.0], v))
        steps = np.arange(5)
        cols = np.minimum(pos[:, None] + steps, len(ve) - 1)  # zero-weight overhang
        out = (W * ve[cols]).sum(axis=1) / self.r
        out[-1] = 0.0
        return out

    def laplacian_banded(self) -> np.ndarray:
        """Banded (diagonal-ordered, bandwidth (2,2)) Laplacian acting on the
        interior v = r u unknowns; rows/columns 0..n-2."""
        if self._lap is None:
            self._build_lap()
        return self._lap

    def implicit_heat_solve(self, rhs_u: np.ndarray, tau: float) -> np.ndarray:
        """Solve (I - tau*Laplacian) u = rhs_u with the Dirichlet condition."""
        if self._lap is None:
            self._build_lap()
        m = self.n - 1
        ab = -tau * self._lap
        ab[2, :] += 1.0
        v = solve_banded((2, 2), ab, (self.r * rhs_u)[:m])
        out = np.empty(self.n)
        out[:m] = v / self.r[:m]
        out[-1] = 0.0
        return out

    # -- Newton potential ---------------------------------------------------

    def _cumulative_moment(self, f: np.ndarray, m: int) -> np.ndarray:
        """I_k = int_0^{r_k} f(s) s^m ds, one value per node, vectorized.

        Panel integrals use the average of the left- and right-anchored
        parabola through three consecutive nodes; the first cell [0, r_0)
        is approximated by f_0 r_0^{m+1}/(m+1).
        """
        r = self.r
        g = f * r ** m
        n = self.n
        panel = np.zeros(n)
        panel[0] = f[0] * r[0] ** (m + 1) / (m + 1)

        r0, r1, r2 = r[:-2], r[1:-1], r[2:]
        g0, g1, g2 = g[:-2], g[1:-1], g[2:]

        def seg(a, b, x0, x1, x2, y0, y1, y2):
            # integral over [a, b] of the quadratic interpolant through
            # (x0,y0),(x1,y1),(x2,y2), via divided differences
            d1 = (y1 - y0) / (x1 - x0)
            d2 = ((y2 - y1) / (x2 - x1) - d1) / (x2 - x0)
            # y(x) = y0 + d1 (x-x0) + d2 (x-x0)(x-x1)
            def prim(x):
                t = x - x0
                return y0 * t + d1 * t * t / 2 + d2 * (t * t * t / 3 - (x1 - x0) * t * t / 2)
            return prim(b) - prim(a)

        left = seg(r0, r1, r0, r1, r2, g0, g1, g2)    # on [r_{i-1}, r_i]
        right = seg(r1, r2, r0, r1, r2, g0, g1, g2)   # on [r_i, r_{i+1}]
        # panel over [r_{i-1}, r_i]: average the two parabolas that cover it
        panel[1] = left[0]
        panel[2:-1] = 0.5 * (right[:-1] + left[1:])
        panel[-1] = right[-1]
        return np.cumsum(panel)

    def poisson(self, rho: np.ndarray) -> np.ndarray:
        """Solve the radial Poisson problem for the Newton potential.

        phi(r) = 4 pi [ (1/r) int_0^r s^2 rho ds + int_r^R s rho ds ],
        the shell-theorem reduction of int rho(y)/|x-y| dy.
        """
        i2 = self._cumulative_moment(rho, 2)
        i1 = self._cumulative_moment(rho, 1)
        return 4.0 * np.pi * (i2 / self.r + (i1[-1] - i1))

    # -- misc ---------------------------------------------------------------

    def rearrange_decreasing(self, u: np.ndarray) -> np.ndarray:
        """Discrete Schwarz rearrangement: the decreasing quantile of |u|
        against the volume measure, resampled at each node's half-measure
        point.  Already-monotone data comes back unchanged (source and
        target measure points coincide); for general data the integral
        functionals of |u| are preserved to second order in the panel
        weights."""
        vals = np.abs(u)
        order = np.argsort(-vals, kind="stable")
        sorted_vals = vals[order]
        w_sorted = self.w[order]
        src = np.cumsum(w_sorted) - 0.5 * w_sorted
        dst = np.cumsum(self.w) - 0.5 * self.w
        out = np.interp(dst, src, sorted_vals)
        out[-1] = 0.0
        return out


@dataclass
class RadialFunction:
    """A radial profile: values on a grid with the Dirichlet truncation."""

    grid: RadialGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.n,):
            raise ValueError(f"values shape {v.shape} does not match grid n={self.grid.n}")
        if not np.all(np.isfinite(v)):
            raise ValueError("non-finite values in radial function")
        v = v.copy()
        v[-1] = 0.0
        self.values = v

    @property
    def mass(self) -> float:
        """||u||_2^2 (4 pi included)."""
        return self.grid.norm2_sq(self.values)


def make_grid(n: int, r_max: float, spacing: str = "graded") -> RadialGrid:
    """Build a radial grid.

    Parameters
    ----------
    n : number of nodes (>= 16)
    r_max : truncation radius (> 0)
    spacing : "uniform" (r_i = (i+1) R/n) or "graded" (r_i = ((i+1)/n)^2 R,
        clustering nodes toward the origin for concentration phenomena)

    The weights integrate f(r) r^2 dr with all-positive entries; a final
    normalization makes the f == 1 integral equal to R^3/3 exactly.
    """
    if n < 16:
        raise ValueError(f"n must be >= 16, got {n}")
    if not r_max > 0:
        raise ValueError(f"r_max must be positive, got {r_max}")
    x = np.arange(1, n + 1) / n
    if spacing == "uniform":
        r = r_max * x
        dpsi = np.full(n, r_max)
    elif spacing == "graded":
        r = r_max * x * x
        dpsi = 2.0 * r_max * x
    else:
        raise ValueError(f"unknown spacing {spacing!r}")
    sx = _simpson_chain_weights(n) / n
    w = sx * dpsi * r * r
    w[0] += r[0] ** 3 / 3.0
    w *= (r_max ** 3 / 3.0) / w.sum()
    return RadialGrid(n=n, r_max=float(r_max), spacing=spacing, r=r, w=w)


def poisson_potential(u: RadialFunction) -> RadialFunction:
    """Newton potential phi_u of the density u^2 (non-negative, non-increasing,
    with r*phi -> ||u||_2^2 at the boundary)."""
    phi = u.grid.poisson(u.values * u.values)
    out = RadialFunction(u.grid, phi)
    out.values[-1] = phi[-1]  # the potential does not vanish at R_max
    return out


def rescale_fiber(u: RadialFunction, t: float) -> RadialFunction:
    """Mass-preserving dilation u^t(r) = t^{3/2} u(t r).

    Interpolates with a monotone-safe cubic (PCHIP) on an even extension
    through the origin and extends by zero beyond R_max.
    """
    if not t > 0:
        raise ValueError(f"dilation parameter must be positive, got {t}")
    if t == 1.0:
        return RadialFunction(u.grid, u.values.copy())
    g = u.grid
    vals = _rescale_values(g, u.values, t)
    return RadialFunction(g, vals)


def _rescale_values(g: RadialGrid, u: np.ndarray, t: float) -> np.ndarray:
    """Array-level core of rescale_fiber."""
    re = np.concatenate((-g.r[2::-1], g.r))
    ue = np.concatenate((u[2::-1], u))
    with np.errstate(all="ignore"):
        interp = PchipInterpolator(re, ue, extrapolate=False)
        vals = interp(t * g.r)
    vals = np.where(np.isfinite(vals), vals, 0.0)
    vals *= t ** 1.5
    vals[-1] = 0.0
    return vals
