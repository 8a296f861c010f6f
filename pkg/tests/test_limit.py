import numpy as np
import pytest

from hyperwedge.errors import SonicDegeneracy
from hyperwedge.limit import (upsilon_grad, upsilon_grad_oracle, upsilon_hess,
                              upsilon_hess_oracle)


def test_hessian_coefficients_frozen(fc1, wall_wide):
    # at k = 0.5 (u, v) = (0.2, 0.4): Y_uu = 2.34375 B'' + 13.125 B'
    _, B1, B2 = wall_wide.eval(0.5)
    assert upsilon_hess(0.5, wall_wide, fc1)[0] == pytest.approx(2.34375 * B2 + 13.125 * B1, rel=1e-14)


def test_gradient_frozen(fc1, wall_wide):
    # Y_u = 3 v B' / (q-u)^2 = 1.875 B', Y_v = (q-6u) B' / ((q-2u)(q-u)) = -5/12 B'
    _, B1, _ = wall_wide.eval(0.5)
    gu, gv = upsilon_grad(0.5, wall_wide, fc1)
    assert gu == pytest.approx(1.875 * B1, rel=1e-14)
    assert gv == pytest.approx(-5 / 12 * B1, rel=1e-14)


@pytest.mark.parametrize("k", np.linspace(0.31, 0.59, 15))
def test_closed_forms_match_linear_solves(fc2, wall, k):
    g = np.array(upsilon_grad(k, wall, fc2))
    go = np.array(upsilon_grad_oracle(k, wall, fc2))
    assert np.max(np.abs(g - go)) <= 1e-12 * np.max(np.abs(go))
    H = np.array(upsilon_hess(k, wall, fc2))
    Ho = np.array(upsilon_hess_oracle(k, wall, fc2))
    assert np.max(np.abs(H - Ho)) <= 1e-9 * np.max(np.abs(Ho))


def test_sonic_degeneracy(fc1, wall_wide):
    with pytest.raises(SonicDegeneracy):
        upsilon_grad(np.sqrt(0.5) - 1e-9, wall_wide, fc1)
