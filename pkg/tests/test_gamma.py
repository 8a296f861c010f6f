import numpy as np
import pytest

from hyperwedge.gamma import (chebyshev_knots, check_gamma_lower_bound, gamma_quadrature,
                              gamma_rhs, gamma_tip, h_direct, solve_gamma_ode, tip_leading)
from hyperwedge.slope import h_of


def test_h_direct_matches_scalar_path(fc2):
    ks = np.linspace(0.31, 0.59, 5)
    np.testing.assert_allclose(h_direct(ks, 1e-3, fc2), [h_of(k, 1e-3, fc2) for k in ks], rtol=1e-12)


def test_knots_cluster_and_exclude_sharp():
    k = chebyshev_knots(0.3, 0.6, 64)
    assert k[0] == pytest.approx(0.3) and k[-1] < 0.6
    d = np.diff(k)
    assert d[0] < d[len(d) // 2] and d[-1] < d[len(d) // 2]


@pytest.mark.parametrize("eps", [1e-2, 1e-3])
def test_ode_matches_quadrature(wall, fc2, gammas, eps):
    c = gammas(eps)
    for k in np.linspace(wall.flat, wall.sharp - wall.delta / 2, 6)[1:]:
        assert abs(c.value(k) - gamma_quadrature(wall, eps, fc2, k)) <= 1e-8 * eps


@pytest.mark.parametrize("eps", [1e-2, 1e-3, 1e-4])
def test_gamma_stays_between_wall_and_shock(wall, gammas, eps):
    c = gammas(eps)
    k = np.linspace(wall.flat, wall.sharp, 401)[1:-1]
    G = c.value(k)
    assert c.value(wall.flat) == pytest.approx(eps, rel=1e-14)
    assert np.all(G < eps) and np.all(G > 0)


def test_slope_is_ode_right_hand_side(wall, fc2, gammas):
    c = gammas(1e-3)
    k = 0.45
    assert c.deriv(k) == pytest.approx(gamma_rhs(k, c.value(k), wall, 1e-3, fc2), rel=1e-9)


def test_second_derivative_against_finite_difference(gammas):
    c, k, h = gammas(1e-3), 0.45, 1e-5
    fd = (c.deriv(k + h) - c.deriv(k - h)) / (2 * h)
    assert c.deriv2(k) == pytest.approx(fd, rel=1e-6)


def test_tip_representation_agrees_with_ode(wall, fc2, gammas):
    c = gammas(1e-3)
    k = wall.sharp - wall.delta / 2
    assert abs(gamma_tip(wall, 1e-3, fc2, k, c.coeffs) - float(c._sol(k)[0] * 1e-3 + 1e-3)) < 1e-10 * 1e-3


def test_tip_leading_order(wall, fc2, gammas):
    c = gammas(1e-3)
    ratios = [(c.value(k) - 1e-3) / tip_leading(wall, 1e-3, fc2, k)
              for k in wall.sharp - np.array([1e-3, 1e-4, 1e-5])]
    assert abs(ratios[-1] - 1) < abs(ratios[0] - 1) + 1e-12
    assert ratios[-1] == pytest.approx(1.0, abs=1e-3)


def test_lower_bound_stable(gammas):
    vals = [check_gamma_lower_bound(gammas(e)) for e in (1e-2, 1e-3, 1e-4)]
    assert min(vals) > 0
    assert max(vals) / min(vals) < 1.2


def test_normalised_norms_stable(wall, gammas):
    k = np.linspace(wall.flat, wall.sharp - wall.delta / 2, 800)
    C = []
    for e in (1e-2, 1e-3, 1e-4):
        c = gammas(e)
        C.append([np.max(np.abs(c.value(k))) / e, np.max(np.abs(c.deriv(k))) / e,
                  np.max(np.abs(c.deriv2(k))) / e])
    C = np.array(C)
    assert np.all(C.max(axis=0) / C.min(axis=0) <= 2.0)


def test_explicit_knot_grid(wall, fc2):
    knots = np.linspace(0.3, 0.59, 11)
    c = solve_gamma_ode(wall, 1e-3, fc2, grid=knots)
    np.testing.assert_array_equal(c.knots, knots)
    assert c.values.shape == knots.shape
