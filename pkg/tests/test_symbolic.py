import time
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hyperwedge.errors import ZeroDenominator
from hyperwedge.symbolic import (TARGETS, PolyQ, RatQ, proportionality, rat_eq, reduce,
                                 reset_targets, run_identity_suite)
from hyperwedge.symbolic.suite import DEFAULT_TARGETS, ITEMS, check_denominators, interior_C

u, v, q, b = (PolyQ.var(n) for n in "uvqb")


def _circle(k, qv=Fraction(1)):
    k = Fraction(k)
    s = 1 + k * k
    return {"u": qv * k * k / s, "v": qv * k / s, "q": qv, "b": Fraction(3), "c": Fraction(5),
            "e": Fraction(0)}


monomial = st.tuples(st.integers(0, 3), st.integers(0, 4), st.integers(0, 2),
                     st.integers(-5, 5))
poly = st.lists(monomial, min_size=1, max_size=5).map(
    lambda ms: sum((c * u ** a * v ** bb * q ** d for a, bb, d, c in ms), PolyQ.const(0)))


def test_reduce_examples():
    assert reduce(v * v) == u * q - u * u
    assert reduce(u * u + v * v - q * u).is_zero()
    assert reduce(v ** 3) == v * (u * q - u * u)


@given(poly)
@settings(max_examples=60, deadline=None)
def test_reduce_idempotent_and_linear_in_v(p):
    r = reduce(p)
    assert reduce(r) == r
    assert r.degree("v") <= 1


@given(poly, poly)
@settings(max_examples=40, deadline=None)
def test_reduce_is_ring_homomorphism(p1, p2):
    assert reduce(p1 * p2) == reduce(reduce(p1) * reduce(p2))
    assert reduce(p1 + p2) == reduce(p1) + reduce(p2)


@given(poly, st.fractions(Fraction(1, 10), Fraction(7, 10), max_denominator=50))
@settings(max_examples=40, deadline=None)
def test_reduce_preserves_values_on_circle(p, k):
    pt = _circle(k)
    assert reduce(p).evaluate(**pt) == pytest.approx(p.evaluate(**pt), rel=1e-12, abs=1e-14)


def test_interior_coefficients_restricted():
    C1, C2 = interior_C()
    assert rat_eq(C1, TARGETS["C1"]) and rat_eq(C2, TARGETS["C2"])
    assert not rat_eq(C1, TARGETS["C1"] + RatQ(u, 1000))


def test_zero_denominator():
    with pytest.raises(ZeroDenominator):
        RatQ(u, 0)
    with pytest.raises(ZeroDenominator):
        rat_eq(RatQ(u, u * u + v * v - q * u), RatQ(u))


def test_proportionality_factor():
    assert proportionality(RatQ(3 * u * v), RatQ(u * v), **_circle(Fraction(1, 2))) == 3


def test_target_denominators_nonvanishing():
    assert check_denominators()


def test_suite_passes_quickly():
    t0 = time.perf_counter()
    rep = run_identity_suite()
    assert rep.passed, [i.as_dict() for i in rep.items if not i.passed]
    assert len(rep.items) == 10
    assert time.perf_counter() - t0 < 5.0
    sg = rep.items[4]
    assert sg.factor == pytest.approx(1.0)


@pytest.mark.parametrize("key", sorted(TARGETS))
def test_mutated_target_is_detected(key):
    try:
        TARGETS[key] = -TARGETS[key]
        failed = [r.index for r in (fn() for fn in ITEMS) if not r.passed]
        assert failed, f"sign flip of {key} went unnoticed"
    finally:
        reset_targets()
    assert TARGETS[key] is DEFAULT_TARGETS[key]
