import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hyperwedge.errors import BlendNotConvex
from hyperwedge.wall import (make_blended_profile, make_pure_tail_profile,
                             sample_profile, validate)


def test_tail_value_exact(wall_wide):
    # inside the tail B = (sharp - k)^(-alpha) exactly
    assert wall_wide(0.55) == pytest.approx(20.0, rel=1e-14)


def test_flat_end_conditions(wall_wide):
    B, B1, B2 = wall_wide.eval(0.2)
    assert B == pytest.approx(0.0, abs=1e-14)
    assert B1 == pytest.approx(1 / 0.4 ** 2, rel=1e-13)
    assert B2 > 0


@pytest.mark.parametrize("W", ["wall", "wall_wide"])
def test_c3_continuity_at_blend_end(request, W):
    W = request.getfixturevalue(W)
    kb = W.blend_end

    def gaps(h):
        return np.abs(np.subtract(W.derivs(kb + h, 3), W.derivs(kb - h, 3)))

    # a jump would leave the gap O(1); continuity makes it shrink like h
    np.testing.assert_array_less(gaps(1e-7), 0.2 * gaps(1e-6) + 1e-12)


@pytest.mark.parametrize("W", ["wall", "wall_wide"])
def test_validate_passes(request, W):
    rep = validate(request.getfixturevalue(W))
    assert rep.passed, str(rep)


def test_nonconvex_blend_rejected():
    with pytest.raises(BlendNotConvex):
        make_blended_profile(0.3, 0.6, 1.0, 0.1)


def test_bad_parameters():
    with pytest.raises(ValueError):
        make_blended_profile(0.6, 0.3, 1.0, 0.05)


def test_pure_tail(wall):
    P = make_pure_tail_profile(0.3, 0.6, 1.0, 0.05)
    assert P(0.5) == pytest.approx(10.0 - 1 / 0.3, rel=1e-14)
    assert P(0.3) == pytest.approx(0.0, abs=1e-14)


def test_sample_profile_shape(wall):
    s = np.asarray(sample_profile(wall, 50))
    assert s.shape == (50, 4)
    assert np.all(np.diff(s[:, 1]) > 0)


@settings(max_examples=60, deadline=None)
@given(a=st.floats(0.3, 0.599), b=st.floats(0.3, 0.599))
def test_monotone_and_convex(wall, a, b):
    lo, hi = min(a, b), max(a, b)
    assert wall(lo) <= wall(hi)
    _, B1, B2 = wall.eval(np.array([lo, hi]))
    assert np.all(B1 > 0) and np.all(B2 > 0)
