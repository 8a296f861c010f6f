import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hyperwedge.errors import NotOnPolar
from hyperwedge.hodograph import (interior_coeffs, oblique_alt_form,
                                  shock_oblique_coeffs, x_gradient_from_y)
from hyperwedge.model import (Velocity, incoming_from_flux, limit_polar_point,
                              polar_point, sound_speed_sq)


def test_interior_coefficients_frozen(fc1):
    # c^2 = 0.4 at (0.2, 0.4) with q_bar = 1
    pc = interior_coeffs(Velocity(0.2, 0.4), fc1)
    assert (pc.a_uu, pc.a_uv, pc.a_vv) == pytest.approx((0.24, 0.16, 0.36), rel=1e-14)
    assert pc.b_u == pytest.approx(1.2, rel=1e-14)
    assert pc.b_v == pytest.approx(1.4, rel=1e-14)


@settings(max_examples=80, deadline=None)
@given(u=st.floats(0.0, 0.5), v=st.floats(0.01, 0.5))
def test_discriminant_identity(fc1, u, v):
    U = Velocity(u, v)
    if u * u + v * v >= 0.9:
        return
    c2 = sound_speed_sq(U, fc1)
    if abs(c2 - v * v) < 1e-3:
        return
    pc = interior_coeffs(U, fc1)
    q2 = u * u + v * v
    assert pc.discriminant == pytest.approx(-c2 * (c2 - q2), abs=1e-13)
    assert (pc.discriminant < 0) == (q2 < c2)


@pytest.mark.parametrize("k", [0.3, 0.45, 0.6])
def test_restricted_oblique_coefficients(fc1, k):
    U = limit_polar_point(k, fc1)
    ob = shock_oblique_coeffs(U, incoming_from_flux(0.0, fc1), fc1)
    q, u, v = 1.0, U.u, U.v
    assert ob.I == pytest.approx(-q * (u - q) ** 2 * (6 * u - q) / 2, rel=1e-12)
    assert ob.J == pytest.approx(-3 * q * (u - q) * (2 * u - q) * v / 2, rel=1e-12)


@pytest.mark.parametrize("eps", [1e-4, 1e-3, 1e-2])
def test_alternative_form_is_parallel(fc2, eps):
    inflow = incoming_from_flux(eps, fc2)
    U = polar_point(np.linspace(0.3, 0.6, 9), inflow, fc2)
    a = shock_oblique_coeffs(U, inflow, fc2)
    b = oblique_alt_form(U, inflow, fc2)
    scale = np.hypot(a.I, a.J) * np.hypot(b.I, b.J)
    assert np.max(np.abs(a.cross(b)) / scale) < 1e-10


def test_off_polar_rejected(fc1):
    with pytest.raises(NotOnPolar):
        shock_oblique_coeffs(Velocity(0.2, 0.3), incoming_from_flux(1e-3, fc1), fc1)


def test_oriented_flips_sign(fc1):
    U = limit_polar_point(0.4, fc1)
    ob = shock_oblique_coeffs(U, incoming_from_flux(0.0, fc1), fc1)
    o = ob.oriented((-ob.I, -ob.J))
    assert (o.I, o.J) == (-ob.I, -ob.J)


def test_x_gradient(fc1):
    U = Velocity(0.2, 0.4)
    xu, xv = x_gradient_from_y(U, 1.5, -0.5, fc1)
    assert xv == 1.5
    assert xu == pytest.approx(-(2 * 0.08 * 1.5 + 0.36 * -0.5) / 0.24, rel=1e-14)
