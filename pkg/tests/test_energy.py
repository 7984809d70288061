"""Energy breakdown, gradient, and multiplier identities.

The gradient is checked against central finite differences of the energy (an
oracle that never touches the gradient code), and the two multiplier formulas
are checked against their exact algebraic relation: they differ by Q/c.
"""

import numpy as np
import pytest

from spslater.energy import (
    ProblemParams,
    energy_breakdown,
    h1_gradient,
    lagrange_multiplier,
    pohozaev_residual,
)
from spslater.grid import RadialFunction, make_grid


def _random_profile(g, rng, humps=3):
    u = np.zeros_like(g.r)
    for _ in range(humps):
        u += rng.uniform(0.2, 1.0) * np.exp(
            -rng.uniform(0.3, 2.0) * (g.r - rng.uniform(0.0, 2.0)) ** 2)
    u[-1] = 0.0
    return u


def test_params_validation():
    with pytest.raises(ValueError):
        ProblemParams(1.0, 1.0, 10.0 / 3.0, 1.0)  # p must exceed 10/3
    with pytest.raises(ValueError):
        ProblemParams(1.0, 1.0, 6.5, 1.0)
    with pytest.raises(ValueError):
        ProblemParams(1.0, 1.0, 4.0, 0.0)
    assert ProblemParams(1.0, 1.0, 4.0, 1.0).sigma == 3.0
    assert ProblemParams(1.0, 1.0, 6.0, 1.0).sigma == 6.0


def test_breakdown_signs_and_scale(g1024, rng):
    params = ProblemParams(1.0, 1.0, 4.0, 1.0)
    u = RadialFunction(g1024, _random_profile(g1024, rng))
    e = energy_breakdown(u, params)
    assert e.A > 0 and e.B > 0 and e.C > 0 and e.D > 0
    assert abs(e.F - (0.5 * e.A - 0.25 * e.B - e.C / 4.0)) < 1e-12 * abs(e.F)
    assert abs(e.Q - (e.A - 0.25 * e.B - 0.75 * e.C)) < 1e-12 * max(1, abs(e.Q))


def test_gradient_matches_finite_differences(g512, rng):
    params = ProblemParams(0.7, 1.3, 4.0, 1.0)
    worst = 0.0
    for _ in range(5):
        u = _random_profile(g512, rng)
        v = _random_profile(g512, rng) - _random_profile(g512, rng)
        grad = h1_gradient(RadialFunction(g512, u), params)
        pair = 4 * np.pi * g512.integrate(grad.values * v)

        def F(w):
            return energy_breakdown(RadialFunction(g512, w), params).F

        h = 1e-4
        fd = (F(u + h * v) - F(u - h * v)) / (2 * h)
        worst = max(worst, abs(fd - pair) / max(abs(fd), 1e-12))
    assert worst < 1e-4


def test_multiplier_forms_differ_by_q(g1024, rng):
    # first form: lambda = -(A - gamma B - a C)/c.  corrected form subtracts
    # the Pohozaev combination.  Their difference is exactly -Q/c.
    for p in (4.0, 5.0, 6.0):
        params = ProblemParams(0.9, 1.1, p, 1.0)
        u = RadialFunction(g1024, _random_profile(g1024, rng))
        lam1 = lagrange_multiplier(u, params)
        lam2 = lagrange_multiplier(u, params, corrected=True)
        e = energy_breakdown(u, params)
        assert abs((lam2 - lam1) - e.Q / params.c) < 1e-10 * max(1.0, abs(e.Q))


def test_pohozaev_residual_basics(g1024):
    params = ProblemParams(1.0, 1.0, 4.0, 1.0)
    zero = RadialFunction(g1024, np.zeros(g1024.n))
    assert pohozaev_residual(zero, 0.5, params) == (0.0, 0.0)
    u = RadialFunction(g1024, np.exp(-g1024.r ** 2))
    with pytest.raises(ValueError):
        pohozaev_residual(u, float("nan"), params)
    q_rel, eq_rel = pohozaev_residual(u, 0.5, params)
    assert np.isfinite(q_rel) and np.isfinite(eq_rel)


def test_p6_multiplier_identity(g1024):
    # at p = 6 the corrected multiplier is 3 gamma B / (4c), which makes the
    # relation 2(6-p)A + (5p-12) gamma B = 2(3p-6) lambda D hold identically
    params = ProblemParams(1.3, 0.8, 6.0, 2.0)
    u = RadialFunction(g1024, np.exp(-0.7 * g1024.r ** 2) * (1 + g1024.r))
    u = RadialFunction(g1024, u.values * np.sqrt(2.0 / u.mass))
    lam = lagrange_multiplier(u, params, corrected=True)
    e = energy_breakdown(u, params)
    assert abs(lam - 0.75 * params.gamma * e.B / params.c) < 1e-12 * abs(lam)
    _, eq_rel = pohozaev_residual(u, lam, params)
    assert eq_rel < 1e-12


def test_gradient_dirichlet_edge(g512):
    params = ProblemParams(1.0, 1.0, 4.0, 1.0)
    u = RadialFunction(g512, np.exp(-g512.r ** 2))
    grad = h1_gradient(u, params)
    assert grad.values[-1] == 0.0
