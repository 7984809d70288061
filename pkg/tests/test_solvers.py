"""Branch solvers: structure of the solved pair, residuals, positivity,
Newton polish behavior, domain adaptation, and regime validation."""

import numpy as np
import pytest

from spslater.energy import ProblemParams, energy_breakdown, lagrange_multiplier
from spslater.errors import NonConvergence
from spslater.grid import make_grid
from spslater.solvers import (
    newton_polish,
    nonexistence_probe,
    solve_global,
    solve_minus,
    solve_plus,
)


def test_pair_structure(pair_p4, consts_p4):
    params, rp, rm = pair_p4
    assert rp.converged and rm.converged
    assert rp.branch == "PlusLocalMin" and rm.branch == "MinusMountainPass"
    # energy ordering and the kinetic gate between the branches
    assert rp.energy < 0.0 < rm.energy
    ep = energy_breakdown(rp.u, params)
    em = energy_breakdown(rm.u, params)
    assert ep.A < consts_p4.k1 < em.A
    # positive multipliers and positive profiles (ground-state branch)
    assert rp.lam > 0 and rm.lam > 0
    assert np.all(rp.u.values[:-1] > -1e-12)
    assert np.all(rm.u.values[:-1] > -1e-12)


def test_pair_residuals(pair_p4):
    _, rp, rm = pair_p4
    for r in (rp, rm):
        assert r.q_rel <= 1e-5
        assert r.el_rel <= 1e-5
        assert r.eq_rel <= 1e-5
        assert r.grad_rel <= 1e-6


def test_mass_is_exact(pair_p4):
    params, rp, rm = pair_p4
    assert abs(rp.u.mass - params.c) <= 1e-12 * params.c
    assert abs(rm.u.mass - params.c) <= 1e-12 * params.c


def test_reported_multiplier_matches_formula(pair_p4):
    params, rp, _ = pair_p4
    lam = lagrange_multiplier(rp.u, params, corrected=True)
    assert abs(lam - rp.lam) <= 1e-10 * max(1.0, abs(lam))
    # at a converged point the two multiplier formulas agree (Q = 0)
    lam_first = lagrange_multiplier(rp.u, params)
    assert abs(lam_first - rp.lam) <= 1e-5 * abs(rp.lam)


def test_solver_validation(consts_p4):
    with pytest.raises(ValueError):
        solve_plus(ProblemParams(-1.0, 1.0, 4.0, 1.0), consts_p4)
    with pytest.raises(ValueError):
        solve_plus(ProblemParams(1.0, 1.0, 4.0, 2.0 * consts_p4.c1), consts_p4)
    with pytest.raises(ValueError):
        solve_minus(ProblemParams(1.0, 1.0, 4.0, 2.0 * consts_p4.c1), consts_p4)
    with pytest.raises(ValueError):
        solve_global(ProblemParams(1.0, 1.0, 4.0, 1.0))  # needs a < 0


def test_newton_polish_reaches_stationarity(pair_p4):
    # restart the polish from a perturbed solution; it must pull back to a
    # stationary point with the same multiplier (on the solution's own grid,
    # which the solver may have retargeted)
    params, rp, _ = pair_p4
    g = rp.u.grid
    u0 = rp.u.values * (1.0 + 1e-3 * np.exp(-g.r))
    u0 *= np.sqrt(params.c / (4 * np.pi * g.integrate(u0 * u0)))
    u, lam, ok, steps = newton_polish(g, u0, rp.lam, params)
    assert ok
    assert steps <= 15
    assert abs(lam - rp.lam) < 1e-6 * abs(rp.lam)


def test_domain_adaptation_widens(consts_p4):
    # small mass -> small lambda -> slow decay: the solver re-solves on a
    # wider domain and says so in the result grid
    params = ProblemParams(1.0, 1.0, 4.0, 0.1 * consts_p4.c1)
    g = make_grid(1024, 40.0, "graded")
    res = solve_plus(params, consts_p4, grid=g)
    assert res.converged
    assert res.u.grid.r_max > 40.0
    assert np.sqrt(res.lam) * res.u.grid.r_max > 13.9


def test_domain_adaptation_can_be_disabled(consts_p4):
    params = ProblemParams(1.0, 1.0, 4.0, 0.1 * consts_p4.c1)
    g = make_grid(1024, 40.0, "graded")
    try:
        res = solve_plus(params, consts_p4, grid=g, adapt_domain=False)
        assert res.u.grid.r_max == 40.0
    except NonConvergence:
        pass  # acceptable: truncation can spoil the residual at fixed R


def test_solve_global_p5():
    params = ProblemParams(1.0, -1.0, 5.0, 1.0)
    res = solve_global(params, grid=make_grid(1024, 40.0, "graded"))
    assert res.converged
    assert res.branch == "GlobalMin"
    assert res.energy < 0.0
    assert res.lam > 0.0
    assert res.q_rel <= 1e-5 and res.el_rel <= 1e-5


def test_minus_from_cold_start(g1024, consts_p4):
    # without an init profile the solver builds its own plus seed
    params = ProblemParams(1.0, 1.0, 4.0, 1.0)
    rm = solve_minus(params, consts_p4, grid=g1024)
    assert rm.converged and rm.energy > 0.0


def test_nonexistence_probe_monotone():
    probe = nonexistence_probe(ProblemParams(-1.0, -1.0, 4.0, 1.0), None, trials=20,
                               grid=make_grid(512, 30.0, "graded"))
    assert probe["monotone_fiber"]
    assert probe["min_normalized_gprime"] > 0.0
    assert probe["t_points"] == 100


def test_nonexistence_probe_validation(consts_p4):
    with pytest.raises(ValueError):
        nonexistence_probe(ProblemParams(1.0, 1.0, 4.0, 1.0), consts_p4)
    with pytest.raises(ValueError):
        # p = 6 probe needs the sharp constants
        nonexistence_probe(ProblemParams(-1.0, 1.0, 6.0, 1.0), None)
