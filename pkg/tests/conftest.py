import numpy as np
import pytest

from spslater.constants import sharp_kgn, sharp_kh, thresholds
from spslater.energy import ProblemParams
from spslater.grid import make_grid
from spslater.solvers import solve_minus, solve_plus


@pytest.fixture(scope="session")
def g512():
    return make_grid(512, 30.0, "graded")


@pytest.fixture(scope="session")
def g1024():
    return make_grid(1024, 40.0, "graded")


@pytest.fixture(scope="session")
def g2048():
    return make_grid(2048, 40.0, "graded")


@pytest.fixture(scope="session")
def maximizers_p4(g1024):
    """Sharp constants with their maximizing profiles at n=1024 (one ascent
    pair for the whole session)."""
    K_H, u_h = sharp_kh(g1024, return_profile=True)
    K_GN, u_g = sharp_kgn(4.0, g1024, return_profile=True)
    return K_H, u_h, K_GN, u_g


@pytest.fixture(scope="session")
def consts_p4(maximizers_p4):
    """Sharp constants and thresholds for (gamma, a, p) = (1, 1, 4) at n=1024."""
    K_H, _, K_GN, _ = maximizers_p4
    return thresholds(ProblemParams(1.0, 1.0, 4.0, 1.0), K_GN, K_H)


@pytest.fixture(scope="session")
def pair_p4(g1024, consts_p4):
    """Both branches of (1, 1, 4) at c = 1, solved once for the whole session."""
    params = ProblemParams(1.0, 1.0, 4.0, 1.0)
    rp = solve_plus(params, consts_p4, grid=g1024)
    rm = solve_minus(params, consts_p4, init=rp.u, grid=g1024)
    return params, rp, rm


@pytest.fixture()
def rng():
    return np.random.default_rng(42)
