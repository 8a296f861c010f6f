import numpy as np
import pytest

from hyperwedge.bvp import build_domain, solve, assemble
from hyperwedge.gamma import solve_gamma_ode
from hyperwedge.model import FlowConstants
from hyperwedge.wall import make_blended_profile

SWEEP = (1e-2, 3e-3, 1e-3, 3e-4)


@pytest.fixture(scope="session")
def fc1():
    return FlowConstants(1.0)


@pytest.fixture(scope="session")
def fc2():
    return FlowConstants(2.0)


@pytest.fixture(scope="session")
def wall():
    return make_blended_profile(0.3, 0.6, 1.0, 0.05)


@pytest.fixture(scope="session")
def wall_wide():
    return make_blended_profile(0.2, 0.6, 1.0, 0.1)


@pytest.fixture(scope="session")
def gammas(wall, fc2):
    cache = {}

    def get(eps):
        if eps not in cache:
            cache[eps] = solve_gamma_ode(wall, eps, fc2)
        return cache[eps]

    return get


@pytest.fixture(scope="session")
def strip(wall, fc2, gammas):
    """Solved strip fields keyed by (eps, grid, edge_mode)."""
    cache = {}
    span = wall.sharp - wall.flat

    def get(eps, grid=(128, 16), edge_mode="truncation"):
        key = (eps, grid, edge_mode)
        if key not in cache:
            dom = build_domain(wall, eps, gammas(eps), fc2, 0.01 * span, 0.01 * span, grid,
                               edge_mode)
            cache[key] = solve(assemble(dom, fc2))
        return cache[key]

    return get


def limit_point(k, q=1.0):
    k = np.asarray(k, dtype=float)
    s = 1.0 + k * k
    return q * k * k / s, q * k / s
