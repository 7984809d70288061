"""Quadrature, derivative, Poisson, and rearrangement checks against
independent closed forms (Gaussian moments, the erf potential of a Gaussian
charge, the uniform-ball potential) and an O(n^2) double-sum kernel."""

import numpy as np
import pytest
from scipy.special import erf

from spslater.grid import RadialFunction, make_grid, poisson_potential, rescale_fiber

PI = np.pi


def test_make_grid_validation():
    with pytest.raises(ValueError):
        make_grid(8, 10.0)
    with pytest.raises(ValueError):
        make_grid(256, -1.0)
    with pytest.raises(ValueError):
        make_grid(256, 10.0, "chebyshev")


def test_grid_geometry():
    for spacing in ("uniform", "graded"):
        g = make_grid(256, 20.0, spacing)
        assert g.r[0] > 0.0  # the origin is not a node
        assert np.all(np.diff(g.r) > 0)
        assert abs(g.r[-1] - 20.0) < 1e-12
        assert np.all(g.w >= 0.0)
    # graded grids put the first node at R/n^2: deep resolution near 0
    g = make_grid(1024, 40.0, "graded")
    assert g.r[0] <= 40.0 / 1000.0


def test_integrate_constant_is_exact():
    for spacing in ("uniform", "graded"):
        g = make_grid(512, 7.0, spacing)
        vol = g.integrate(np.ones_like(g.r))
        assert abs(vol - 7.0 ** 3 / 3.0) < 1e-10 * vol  # 4pi * this = ball volume


def test_gaussian_moments_closed_form():
    g = make_grid(4096, 40.0, "graded")
    u = np.exp(-g.r ** 2)
    u[-1] = 0.0
    D = 4 * PI * g.integrate(u * u)
    assert abs(D - PI ** 1.5 / (2 * np.sqrt(2))) < 1e-12 * D
    du = g.derivative(u)
    A = 4 * PI * g.integrate(du * du)
    assert abs(A - 3 * PI ** 1.5 / (2 * np.sqrt(2))) < 1e-8 * A
    C = 4 * PI * g.integrate(u ** 4)
    assert abs(C - PI ** 1.5 / 8) < 1e-12 * C


def test_poisson_gaussian_erf_potential():
    g = make_grid(4096, 40.0, "graded")
    u = np.exp(-g.r ** 2)
    phi = g.poisson(u * u)
    phi_exact = (PI / 2) ** 1.5 * erf(np.sqrt(2) * g.r) / g.r
    assert np.max(np.abs(phi - phi_exact) / phi_exact) < 1e-9
    B = 4 * PI * g.integrate(phi * u * u)
    assert abs(B - PI ** 2.5 / 4) < 1e-11 * B


def test_poisson_uniform_ball():
    g = make_grid(4096, 8.0, "uniform")
    rho = (g.r <= 1.0).astype(float)
    phi = g.poisson(rho)
    inside = 2 * PI * (1 - g.r ** 2 / 3.0)
    sel_in = g.r <= 0.9
    assert np.max(np.abs(phi[sel_in] - inside[sel_in]) / inside[sel_in]) < 5e-3
    i2 = np.argmin(np.abs(g.r - 2.0))
    assert abs(phi[i2] - 2 * PI / 3) < 5e-3 * (2 * PI / 3)


def test_poisson_against_double_sum_kernel():
    # independent O(n^2) discretization of the radial Newton kernel
    g = make_grid(128, 12.0, "graded")
    rho = np.exp(-g.r ** 2) * (1.0 + 0.5 * g.r)
    phi = g.poisson(rho)
    kern = 1.0 / np.maximum.outer(g.r, g.r)
    phi_oracle = 4 * PI * (kern * (g.w * rho)).sum(axis=1)
    assert np.max(np.abs(phi - phi_oracle)) < 1e-3 * np.max(np.abs(phi_oracle))


def test_poisson_far_field_carries_total_charge():
    g = make_grid(2048, 30.0, "graded")
    u = np.exp(-g.r ** 2) * g.r
    rho = u * u
    phi = g.poisson(rho)
    total = 4 * PI * g.integrate(rho)
    assert abs(g.r[-1] * phi[-1] - total) < 1e-8 * total


def test_poisson_potential_wrapper(g1024):
    u = RadialFunction(g1024, np.exp(-g1024.r ** 2))
    phi = poisson_potential(u)
    assert phi.values[0] > phi.values[-1] > 0.0
    # r * phi approaches the total mass at the boundary
    assert abs(g1024.r[-1] * phi.values[-1] - u.mass) < 1e-6 * u.mass


def test_derivative_and_laplacian_accuracy():
    g = make_grid(2048, 30.0, "graded")
    u = np.exp(-g.r ** 2)
    du_exact = -2 * g.r * u
    du = g.derivative(u)
    assert np.max(np.abs(du - du_exact)) < 1e-7 * np.max(np.abs(du_exact))
    lap_exact = (4 * g.r ** 2 - 6) * u
    lap = g.apply_laplacian(u)
    interior = slice(0, -8)  # the one-sided closure rows near r_max are coarser
    err = np.max(np.abs(lap[interior] - lap_exact[interior]))
    assert err < 1e-5 * np.max(np.abs(lap_exact))


def test_implicit_heat_solve_consistency():
    g = make_grid(1024, 30.0, "graded")
    u = np.exp(-g.r ** 2)
    u[-1] = 0.0
    tau = 1e-3
    v = g.implicit_heat_solve(u, tau)
    residual = v - tau * g.apply_laplacian(v) - u
    assert np.max(np.abs(residual[:-8])) < 1e-8


def test_rearrange_decreasing():
    g = make_grid(1024, 30.0, "graded")
    u = np.sin(3 * g.r) * np.exp(-0.5 * g.r)
    u[-1] = 0.0
    v = g.rearrange_decreasing(u)
    assert np.all(np.diff(v) <= 1e-12)
    # resampling the quantile on the fixed grid preserves L^q masses only to
    # second order in the panel weights; ~1e-4 for this oscillatory profile
    m_u = g.integrate(u * u)
    m_v = g.integrate(v * v)
    assert abs(m_u - m_v) < 1e-3 * m_u
    for q in (3, 4):
        assert abs(g.integrate(np.abs(u) ** q) - g.integrate(v ** q)) \
            < 1e-3 * g.integrate(np.abs(u) ** q)
    # already-monotone data passes through exactly
    w = np.exp(-g.r ** 2)
    w[-1] = 0.0
    assert np.array_equal(g.rearrange_decreasing(w), w)


def test_rescale_fiber_mass_and_moments():
    g = make_grid(2048, 40.0, "graded")
    u = RadialFunction(g, np.exp(-g.r ** 2) * (1 + 0.3 * g.r))
    for t in (0.5, 2.0):
        ut = rescale_fiber(u, t)
        assert abs(ut.mass - u.mass) < 1e-6 * u.mass
        # gradient seminorm scales as t^2, quartic term as t^3 (p = 4)
        du, dut = g.derivative(u.values), g.derivative(ut.values)
        A0 = g.integrate(du * du)
        At = g.integrate(dut * dut)
        assert abs(At - t ** 2 * A0) < 1e-5 * t ** 2 * A0
        C0 = g.integrate(u.values ** 4)
        Ct = g.integrate(ut.values ** 4)
        assert abs(Ct - t ** 3 * C0) < 1e-5 * t ** 3 * C0


def test_radial_function_validation(g1024):
    with pytest.raises(ValueError):
        RadialFunction(g1024, np.ones(17))
    bad = np.ones(g1024.n)
    bad[3] = np.nan
    with pytest.raises(ValueError):
        RadialFunction(g1024, bad)
    u = RadialFunction(g1024, np.ones(g1024.n))
    assert u.values[-1] == 0.0  # Dirichlet edge enforced
