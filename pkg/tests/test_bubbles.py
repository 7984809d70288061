"""Bubble construction, expansion rates, and the interaction supremum."""

import numpy as np
import pytest

from spslater.bubbles import (
    Bubble,
    bubble_values,
    interaction_sup,
    make_bubble,
    verify_bubble_estimates,
)
from spslater.energy import FOUR_PI, ProblemParams
from spslater.errors import UnderResolved
from spslater.grid import RadialFunction, make_grid


def test_make_bubble_validation(g1024):
    with pytest.raises(ValueError):
        make_bubble(5e-4, g1024)  # below the supported concentration range
    with pytest.raises(ValueError):
        make_bubble(1.5, g1024)
    with pytest.raises(UnderResolved):
        make_bubble(0.5, make_grid(64, 1.5, "uniform"))  # r_max < cutoff support
    with pytest.raises(UnderResolved):
        make_bubble(1e-3, make_grid(64, 40.0, "uniform"))  # no nodes below eps


def test_bubble_shape(g1024):
    b = make_bubble(0.1, g1024)
    assert isinstance(b, Bubble)
    u = b.values.values
    assert np.all(u >= 0.0)
    assert np.all(np.diff(u[g1024.r < 1.0]) < 0)  # decreasing in the core
    assert np.all(u[g1024.r >= 2.0] == 0.0)  # cutoff support
    # peak height scales like eps^{-1/2}
    b2 = make_bubble(0.05, g1024)
    ratio = b2.values.values[0] / u[0]
    assert abs(ratio - np.sqrt(2.0)) < 0.05


def test_expansion_report(g2048):
    rep = verify_bubble_estimates((0.1, 0.05, 0.025), g2048)
    # A and C share their Sobolev-side limit; at this resolution the two
    # intercepts agree to a percent
    assert abs(rep["A_limit"] / rep["C_limit"] - 1.0) < 1e-2
    assert abs(rep["mass_exponent"] - 1.0) < 0.1
    assert abs(rep["quintic_exponent"] - 0.5) < 0.1
    with pytest.raises(ValueError):
        verify_bubble_estimates((0.05, 0.1, 0.025), g2048)  # not decreasing
    with pytest.raises(ValueError):
        verify_bubble_estimates((0.1, 0.05), g2048)  # too few


def test_subcritical_norms_vanish(g2048):
    # the L^2, L^3, L^5 masses all disappear as the bubble concentrates
    prev = None
    for eps in (0.2, 0.1, 0.05):
        u = bubble_values(g2048, eps)
        norms = (FOUR_PI * g2048.integrate(u * u),
                 FOUR_PI * g2048.integrate(np.abs(u) ** 3),
                 FOUR_PI * g2048.integrate(np.abs(u) ** 5))
        if prev is not None:
            assert all(b < a for a, b in zip(prev, norms))
        prev = norms


def test_interaction_sup_validation(g1024):
    params4 = ProblemParams(1.0, 1.0, 4.0, 1.0)
    u = RadialFunction(g1024, np.exp(-g1024.r ** 2))
    with pytest.raises(ValueError):
        interaction_sup(params4, u, 0.05)  # p must be 6


def test_interaction_sup_basic(g1024):
    # against a narrow Gaussian "minimizer", the glued profile's fiber sup
    # is finite, attained at an interior t, and beats the t = 0 energy
    params = ProblemParams(1.0, 1.0, 6.0, 1.0)
    u0 = np.exp(-g1024.r ** 2)
    u0 *= np.sqrt(1.0 / (FOUR_PI * g1024.integrate(u0 * u0)))
    u = RadialFunction(g1024, u0)
    sup_F, t_at = interaction_sup(params, u, 0.05)
    assert np.isfinite(sup_F)
    assert 1e-2 <= t_at <= 1e2
    from spslater.energy import energy_breakdown
    assert sup_F > energy_breakdown(u, params).F
