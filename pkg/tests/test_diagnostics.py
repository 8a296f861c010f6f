import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hyperwedge.diagnostics import (ResidualReport, boundary_residual, bounded_across,
                                    interior_mask, order_fit, perturbation_check,
                                    stable_within, structural_signs, weighted_norm)
from hyperwedge.errors import InsufficientData
from hyperwedge.limit import upsilon_grad
from hyperwedge.model import limit_polar_point
from hyperwedge.slope import F_of_gradient
from hyperwedge.wall import make_blended_profile


def _rep(eps, sup):
    return ResidualReport(eps, sup, sup, np.zeros(1), np.zeros(1), np.zeros(1))


@given(st.floats(0.5, 4.0), st.floats(-3, 3))
@settings(max_examples=30, deadline=None)
def test_order_fit_recovers_power(p, logc):
    eps = [1e-2, 3e-3, 1e-3, 3e-4]
    assert order_fit([_rep(e, np.exp(logc) * e ** p) for e in eps]) == pytest.approx(p, rel=1e-10)


def test_order_fit_needs_three_eps():
    with pytest.raises(InsufficientData):
        order_fit([_rep(1e-2, 1e-3), _rep(1e-3, 1e-5), _rep(1e-3, 1e-5)])
    with pytest.raises(InsufficientData):
        order_fit([_rep(1e-2, 1e-3), _rep(1e-3, 0.0), _rep(1e-4, 1e-7)])


def test_bounded_and_stable():
    assert bounded_across([1.0, 2.0, 2.9])
    assert not bounded_across([1.0, 3.5])
    assert stable_within([1.0, 2.5])
    assert not stable_within([1.0, 3.5])


def test_interior_mask():
    k = np.linspace(0, 1, 101)
    m = interior_mask(k, 0.0, 1.0, 0.1)
    assert k[m].min() == pytest.approx(0.1) and k[m].max() == pytest.approx(0.9)


def _power(n, m, sharp=1.0):
    k = np.linspace(0.0, sharp - 1e-3, n)
    w = sharp - k
    return k, [w ** -m, m * w ** (-m - 1)]


@pytest.mark.parametrize("m", [0.5, 1.0, 2.0])
def test_weighted_norm_power_law(m):
    k, d = _power(2000, m)
    N = weighted_norm(k, d, m, 1, 0.5, 1.0)
    assert N.sup_part == pytest.approx(max(1.0, m), rel=1e-12)
    assert np.isfinite(N.holder_part) and N.holder_part > 0


def test_weighted_norm_grid_stable():
    vals = [weighted_norm(*_power(n, 1.0), 1.0, 1, 0.5, 1.0).value for n in (1000, 2000, 4000)]
    assert abs(vals[-1] / vals[-2] - 1) <= 0.05


def test_weighted_norm_constant():
    k = np.linspace(0, 0.9, 500)
    N = weighted_norm(k, [np.full_like(k, 3.0), np.zeros_like(k)], 0.0, 1, 0.5, 1.0)
    assert N.holder_part == 0.0 and N.sup_part == pytest.approx(3.0)


def test_weighted_norm_monotone_in_amplitude():
    k, d = _power(800, 1.0)
    a = weighted_norm(k, d, 1.0, 1, 0.5, 1.0).value
    b = weighted_norm(k, [2 * x for x in d], 1.0, 1, 0.5, 1.0).value
    assert b == pytest.approx(2 * a)


def test_weighted_norm_rejects_short_derivs():
    with pytest.raises(ValueError):
        weighted_norm(np.zeros(3), [np.zeros(3)], 1.0, 1, 0.5, 1.0)


@pytest.mark.parametrize("eps", [1e-2, 1e-3, 0.0])
def test_structural_signs_default(wall, fc2, eps):
    rep = structural_signs(wall, eps, fc2)
    assert rep.passed, rep.as_dict()
    if eps == 0.0:
        assert rep.checks[0].name == "sg_dot_gradG_zero_at_limit"


def test_structural_signs_on_domain(strip, wall, fc2):
    F = strip(1e-3)
    rep = structural_signs(wall, 1e-3, fc2, dom=F.dom)
    names = {c.name for c in rep.checks}
    assert {"elliptic_transformed", "elliptic_hodograph"} <= names and rep.passed


def test_near_sonic_margin_small(wall, fc2):
    near = make_blended_profile(0.3, 0.705, 1.0, 0.05)
    m_def = {c.name: c.value for c in structural_signs(wall, 1e-3, fc2).checks}["subsonic"]
    m_near = {c.name: c.value for c in structural_signs(near, 1e-3, fc2).checks}["subsonic"]
    assert 0 < m_near < 0.1 * m_def


def test_limit_gradient_has_zero_slope(wall, fc2):
    """On the limit circle the limit gradient reproduces the circle's own slope (zero)."""
    k = np.linspace(0.32, 0.58, 20)
    U = limit_polar_point(k, fc2)
    gu, gv = upsilon_grad(k, wall, fc2)
    F = F_of_gradient(gu, gv, U, np.zeros_like(k), fc2)
    assert np.max(np.abs(F)) < 1e-12 * np.max(np.abs(gu))


@pytest.mark.parametrize("eps", [1e-2, 1e-3])
def test_residual_forms_agree(strip, eps):
    rep = boundary_residual(strip(eps))
    assert rep.form_gap <= 1e-6
    assert rep.weighted_sup <= rep.sup_residual * (0.6 - 0.3)


def test_residual_drops_with_eps(strip):
    r = [boundary_residual(strip(e, (256, 32))).sup_residual for e in (1e-2, 1e-3)]
    assert r[1] < r[0] / 30


def test_perturbation_ratios_bounded(strip):
    reps = [perturbation_check(strip(e)) for e in (1e-2, 3e-3, 1e-3)]
    assert bounded_across([r.ratio0 for r in reps])
    assert bounded_across([r.ratio1 for r in reps])
