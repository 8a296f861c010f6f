import numpy as np
import pytest

from hyperwedge.physical import export_geometry, integrate_x, jacobian_check, slip_residual


def test_gauge_shift_is_constant(strip):
    F = strip(1e-3)
    a, b = integrate_x(F), integrate_x(F, gauge=(10, 0))
    d = a.x - b.x
    assert np.ptp(d) < 1e-12 * np.ptp(a.x)
    assert b.x[10, 0] == 0.0


def test_two_paths_agree_up_to_circulation(strip):
    F = strip(1e-3, (256, 32))
    a = integrate_x(F)
    b = integrate_x(F, path="columns_first")
    n = a.x.shape[0] // 10
    assert np.max(np.abs(a.x - b.x)[n:-n]) < 1e-3 * np.ptp(a.x)
    with pytest.raises(ValueError):
        integrate_x(F, path="diagonal")


def test_curl_decreases_under_refinement(strip):
    c = [integrate_x(strip(1e-3, g)).curl_residual for g in ((128, 16), (256, 32), (512, 64))]
    assert c[1] < c[0] / 3 and c[2] < c[1] / 3


def test_wall_row_is_wall_data(strip, wall):
    P = integrate_x(strip(1e-3))
    np.testing.assert_allclose(P.y[:, 0], wall(P.k[:, 0]), rtol=1e-13, atol=1e-14)


def test_jacobian_single_signed(strip):
    rep = jacobian_check(integrate_x(strip(1e-3)))
    assert rep.passed and rep.sign == -1 and rep.min_abs > 0


def test_jacobian_fails_with_degenerate_gradient(strip):
    P = integrate_x(strip(1e-3))
    P.jac[5, 5] = 0.0
    assert not jacobian_check(P).passed
    P.jac[5, 5] = 1.0
    assert not jacobian_check(P).passed


def test_slip_decreases_with_eps(strip):
    s = []
    for e in (1e-2, 1e-3, 3e-4):
        P = integrate_x(strip(e))
        n = len(P.k) // 50
        s.append(slip_residual(P)[n:-n].max())
    assert s[0] > s[1] > s[2]


def test_hausdorff_shrinks_and_exports(strip, tmp_path):
    h = []
    for e in (1e-2, 1e-3):
        g = export_geometry(integrate_x(strip(e)), tmp_path / f"e{e}")
        h.append(g.hausdorff)
    assert h[1] < h[0] / 3
    assert (tmp_path / "e0.001" / "wall.csv").read_text().startswith("k,x,y,u,v")
    assert (tmp_path / "e0.001" / "geometry.json").exists()
