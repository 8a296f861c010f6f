import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hyperwedge.coords import (KRho, G_varrho, G_varrho_as_displayed, d_varrho_limit,
                               jacobian, jacobian_at, k_of, ray_derivatives, uv_from_kr,
                               varrho_of)
from hyperwedge.errors import NoConvergence
from hyperwedge.model import (Velocity, incoming_from_flux, inflow_speed_derivs,
                              limit_polar_point, polar_G)
from hyperwedge.model import IncomingFlow


def _G_along_flux(U, r, fc):
    w, w1, w2 = inflow_speed_derivs(r, fc)
    return polar_G(U, IncomingFlow(r, float(w), 0.0, float(w1), float(w2)), fc)


def test_G_varrho_magnitude_at_limit(fc1):
    U = Velocity(0.2, 0.4)
    assert abs(G_varrho(U, 0.0, fc1)) == pytest.approx(4.4, rel=1e-13)
    assert G_varrho_as_displayed(U, 0.0, fc1) == pytest.approx(-G_varrho(U, 0.0, fc1))


def test_G_varrho_sign_matches_finite_difference(fc1):
    U, h = Velocity(0.2, 0.4), 1e-6
    fd = (_G_along_flux(U, h, fc1) - _G_along_flux(U, -h, fc1)) / (2 * h)
    assert G_varrho(U, 0.0, fc1) == pytest.approx(fd, rel=1e-8)
    assert fd > 0


@settings(max_examples=50, deadline=None)
@given(k=st.floats(0.3, 0.65), r=st.floats(0.0, 0.02))
def test_roundtrip_k_varrho(fc2, k, r):
    U = uv_from_kr(KRho(k, r), fc2)
    assert k_of(U) == pytest.approx(k, rel=1e-14)
    assert varrho_of(U, fc2) == pytest.approx(r, abs=1e-12)


def test_outside_tube(fc2):
    with pytest.raises(NoConvergence):
        uv_from_kr(KRho(0.4, 0.9 * fc2.eps_max), fc2)


@pytest.mark.parametrize("k", [0.3, 0.5, 0.65])
def test_general_jacobian_reduces_to_limit_form(fc2, k):
    U = limit_polar_point(k, fc2)
    a, b = jacobian(U, 0.0, fc2), jacobian_at(U, fc2)
    np.testing.assert_allclose(a.forward, b.forward, rtol=1e-12)
    np.testing.assert_allclose(a.inverse, b.inverse, rtol=1e-12)
    np.testing.assert_allclose(a.forward @ a.inverse, np.eye(2), atol=1e-12)


def test_d_varrho_against_ray_difference(fc2):
    k, h = 0.45, 1e-6
    f = lambda U: np.sin(U.u) * U.v ** 2
    fu = lambda U: np.cos(U.u) * U.v ** 2
    fv = lambda U: 2 * np.sin(U.u) * U.v
    U0 = limit_polar_point(k, fc2)
    fd = (f(uv_from_kr(KRho(k, h), fc2)) - f(uv_from_kr(KRho(k, -h), fc2))) / (2 * h)
    assert d_varrho_limit(U0, fu(U0), fv(U0), fc2) == pytest.approx(fd, rel=1e-7)


def test_ray_derivatives_against_finite_differences(fc1):
    k, r, h = 0.5, 1e-3, 1e-5
    rd = ray_derivatives(k, r, fc1)
    V = lambda kk, rr: ray_derivatives(kk, rr, fc1).v
    assert rd.v_k == pytest.approx((V(k + h, r) - V(k - h, r)) / (2 * h), rel=1e-7)
    assert rd.v_r == pytest.approx((V(k, r + h) - V(k, r - h)) / (2 * h), rel=1e-7)
    assert rd.v_kr == pytest.approx(
        (V(k + h, r + h) - V(k + h, r - h) - V(k - h, r + h) + V(k - h, r - h)) / (4 * h * h), rel=1e-4)
    assert rd.v_kk == pytest.approx((V(k + h, r) - 2 * rd.v + V(k - h, r)) / h ** 2, rel=1e-4)
    assert rd.v_rr == pytest.approx((V(k, r + h) - 2 * rd.v + V(k, r - h)) / h ** 2, rel=1e-4)
