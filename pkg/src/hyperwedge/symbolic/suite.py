"""Exact identity suite on the limit shock-polar circle.

Every item builds the general (off-circle, flux-dependent where needed)
expression from first principles, restricts it to the circle by
:func:`reduce` and compares with the closed form stored in :data:`TARGETS`.
The targets live in a mutable dict so that mutation tests can perturb them.

The tangential derivative along the circle uses ``t = (G_v, -G_u) =
(2v, q - 2u)``; since ``t`` annihilates the circle polynomial it is well
defined on the quotient ring.  The marker ``b`` (``B'``) depends on the
point through ``k = u / v``, so ``D_t b = c (t . grad k)``.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .poly import PolyQ, RatQ, proportionality, rat_eq, reduce

u, v, q, b, c, e = (PolyQ.var(n) for n in ("u", "v", "q", "b", "c", "e"))
ONE = PolyQ.const(1)

#: Closed forms on the circle (mutable for mutation testing).
TARGETS = {
    "I": RatQ(-q * (u - q) ** 2 * (6 * u - q), 2),
    "J": RatQ(-3 * q * (u - q) * (2 * u - q) * v, 2),
    "C1": RatQ(2 * u * (4 * u + q), q - 2 * u),
    "C2": RatQ(2 * (q + 2 * u) * v, q - u),
    "Y_u": RatQ(3 * b * v, (q - u) ** 2),
    "Y_v": RatQ(b * (q - 6 * u), (q - 2 * u) * (q - u)),
    "Y_uu": RatQ(-(q - 11 * u) * c, (q - u) ** 3)
    + RatQ(4 * v * (2 * q - 3 * u) * (q + 4 * u) * b, (q - u) ** 3 * (q - 2 * u) * q),
    "Y_uv": RatQ((5 * q - 22 * u) * v * c, (q - u) ** 3 * (q - 2 * u))
    + RatQ((3 * q ** 3 - 16 * u * q ** 2 - 52 * u ** 2 * q + 96 * u ** 3) * b,
           q * (q - u) ** 2 * (q - 2 * u) ** 2),
    "Y_vv": RatQ((q * q - 16 * u * q + 44 * u * u) * c, (q - u) ** 2 * (q - 2 * u) ** 2)
    - RatQ(4 * v * (3 * q ** 3 - 6 * u * q ** 2 - 32 * u ** 2 * q + 48 * u ** 3) * b,
           q * (q - u) ** 2 * (q - 2 * u) ** 3),
    "sgk": RatQ((q - u) * u * q ** 3, 2 * v),
    "sk": RatQ(b * q ** 2 * u, 2 * (q - u) * v),
    "dsgG": RatQ(2 * q * (q - 2 * u) * (q - u)),
    "dsG": RatQ(c * (2 * q + u) * v, (q - u) ** 2)
    + RatQ(b * (2 * q * q + 7 * q * u - 12 * u * u), (q - 2 * u) * (q - u)),
    "G_rho": RatQ(4 * q + 2 * u, q * q),
    "H": RatQ((2 * q * q + 7 * q * u - 12 * u * u) * v, u * (2 * q + u) * (q - 2 * u)),
    "h": RatQ(2 * (q - 2 * u) * v, u * (2 * q + u)),
    "dF_minus_dFg": RatQ(-c, b) - RatQ(5 * (3 * q - 4 * u) * v, (q - 2 * u) * (2 * q + u)),
}
DEFAULT_TARGETS = dict(TARGETS)


# --- general (off-circle) building blocks ------------------------------------------

def rho():
    return RatQ(q * q - u * u - v * v, 4)


def c2():
    return RatQ(q * q - u * u - v * v, 2)


def inflow_speed():
    """``u_in(e)`` to first order: ``q - 2 e / q^2`` (exact value and slope at e = 0)."""
    return RatQ(q ** 3 - 2 * e, q * q)


def polar_G():
    """``(u - e/rho)(u - u_in) + v^2`` as a rational function of ``(u, v, e)``."""
    return (RatQ(u) - RatQ(e) / rho()) * (RatQ(u) - inflow_speed()) + RatQ(v * v)


def at_limit(r: RatQ) -> RatQ:
    return r.subs_zero("e")


def grad_G(limit=True):
    G = polar_G()
    Gu, Gv = G.diff("u"), G.diff("v")
    return (at_limit(Gu), at_limit(Gv)) if limit else (Gu, Gv)


def oblique_IJ(limit=True):
    """General oblique coefficients with velocity jumps ``[u] = u - u_in``, ``[v] = v``."""
    Gu, Gv = grad_G(limit)
    ju = RatQ(u) - (RatQ(q) if limit else inflow_speed())
    jv = RatQ(v)
    a = c2() - RatQ(v * v)
    I = Gu * a * ju - Gv * a * jv + Gv * ju * RatQ(2 * u * v)
    J = Gu * a * jv + Gv * (c2() - RatQ(u * u)) * ju
    return I, J


def interior_C():
    d = c2() - RatQ(v * v)
    C1 = (RatQ(4 * v * v) + 2 * c2()) * RatQ(u) / d
    C2 = ((2 * c2() - RatQ(u * u + v * v)) - RatQ(2 * (u * u - v * v))) * RatQ(v) / d
    return C1, C2


def grad_k():
    return RatQ(ONE, v), RatQ(-u, v * v)


def tangent():
    Gu, Gv = grad_G()
    return Gv, -Gu


def D_t(f: RatQ) -> RatQ:
    """Tangential derivative along the circle (``b`` depends on ``k``)."""
    tu, tv = tangent()
    ku, kv = grad_k()
    tk = tu * ku + tv * kv
    out = tu * f.diff("u") + tv * f.diff("v")
    if f.num.degree("c") or f.den.degree("c"):
        raise ValueError("tangential derivative of B'' terms is not supported")
    fb = f.diff("b")
    if not fb.num.is_zero():
        out = out + fb * RatQ(c) * tk
    return reduce_r(out)


def s_prime(yu, yv):
    a = c2() - RatQ(v * v)
    return (yu * a * RatQ(v) - yv * a * RatQ(u),
            yu * (c2() + RatQ(v * v)) * RatQ(u) + yv * (c2() - RatQ(u * u)) * RatQ(v))


def sg_prime(limit=True):
    Gu, Gv = grad_G(limit)
    ju = RatQ(u) - (RatQ(q) if limit else inflow_speed())
    jv = RatQ(v)
    C = c2()
    m = RatQ(u) * ju + RatQ(v) * jv
    t = C * (RatQ(v) * ju - RatQ(u) * jv)
    a = C - RatQ(v * v)
    return (-(m * (Gu * a + Gv * RatQ(u * v)) + t * Gv),
            -(m * (Gu * RatQ(u * v) + Gv * (C - RatQ(u * u))) - t * Gu))


def d_varrho(f: RatQ) -> RatQ:
    """``d/d varrho`` at the circle along a ray, with the flux following ``varrho``.

    ``lambda (u d_u + v d_v) f + d_e f`` at ``e = 0`` with
    ``lambda = -G_e / (u G_u + v G_v)`` from differentiating ``G = 0``.
    """
    G = polar_G()
    Ge = at_limit(G.diff("e"))
    Gu, Gv = grad_G()
    lam = -Ge / (RatQ(u) * Gu + RatQ(v) * Gv)
    radial = RatQ(u) * f.diff("u") + RatQ(v) * f.diff("v")
    return at_limit(lam * radial + f.diff("e"))


# --- the suite ------------------------------------------------------------------

@dataclass
class ItemResult:
    index: int
    name: str
    passed: bool
    detail: str = ""
    factor: float = float("nan")

    def as_dict(self):
        return {"index": self.index, "name": self.name, "pass": self.passed,
                "detail": self.detail, "factor": self.factor}


@dataclass
class SuiteReport:
    items: list = field(default_factory=list)
    runtime: float = 0.0
    denominators_ok: bool = True

    @property
    def passed(self):
        return self.denominators_ok and all(i.passed for i in self.items)

    def as_dict(self):
        return {"passed": self.passed, "runtime": self.runtime,
                "denominators_ok": self.denominators_ok,
                "items": [i.as_dict() for i in self.items]}


_PROBE = {"q": 1.0, "b": 1.0, "c": 1.0, "e": 0.0}


def _probe_point(k=0.4):
    s = 1.0 + k * k
    return dict(_PROBE, u=k * k / s, v=k / s)


def reduce_r(r):
    """Normal form of numerator and denominator separately (valid on the circle only)."""
    r = RatQ._of(r)
    return RatQ(reduce(r.num), reduce(r.den))


def _check(index, name, lhs, rhs, details=""):
    ok = rat_eq(lhs, rhs)
    factor = float("nan")
    if not ok:
        try:
            factor = float(reduce_eval(lhs) / reduce_eval(rhs))
        except ZeroDivisionError:
            pass
    return ItemResult(index, name, ok, details, factor)


def reduce_eval(r):
    return RatQ._of(r).evaluate(**_probe_point())


def _all_true(checks):
    return all(rat_eq(a, b_) for a, b_ in checks)


def item_oblique_I():
    I, _ = oblique_IJ()
    return _check(1, "restricted oblique coefficient I", I, TARGETS["I"])


def item_oblique_J():
    _, J = oblique_IJ()
    return _check(2, "restricted oblique coefficient J", J, TARGETS["J"])


def item_upsilon_grad():
    I, J = oblique_IJ()
    Yu, Yv = TARGETS["Y_u"], TARGETS["Y_v"]
    ku, kv = grad_k()
    tu, tv = tangent()
    ob = I * Yu + J * Yv
    wall = tu * Yu + tv * Yv - RatQ(b) * (tu * ku + tv * kv)
    ok = rat_eq(ob, 0) and rat_eq(wall, 0)
    return ItemResult(3, "limit gradient solves oblique + wall conditions", ok,
                      f"oblique={rat_eq(ob, 0)} wall={rat_eq(wall, 0)}")


def item_upsilon_hess():
    I, J = oblique_IJ()
    Yu, Yv = TARGETS["Y_u"], TARGETS["Y_v"]
    Yuu, Yuv, Yvv = TARGETS["Y_uu"], TARGETS["Y_uv"], TARGETS["Y_vv"]
    tu, tv = tangent()
    ku, kv = grad_k()
    I, J, tu, tv, ku, kv = (reduce_r(x) for x in (I, J, tu, tv, ku, kv))
    # tangential derivative of the oblique condition
    ob = D_t(I) * Yu + I * (tu * Yuu + tv * Yuv) + D_t(J) * Yv + J * (tu * Yuv + tv * Yvv)
    # second tangential derivative of the wall condition
    wall_lhs = (tu * tu * Yuu + 2 * tu * tv * Yuv + tv * tv * Yvv
                + D_t(tu) * Yu + D_t(tv) * Yv)
    wall_rhs = D_t(RatQ(b) * (tu * ku + tv * kv))
    # interior equation
    C1, C2 = interior_C()
    pde = ((c2() - RatQ(v * v)) * Yuu + RatQ(2 * u * v) * Yuv + (c2() - RatQ(u * u)) * Yvv
           + C1 * Yu + C2 * Yv)
    # restricted interior coefficients
    coef = rat_eq(C1, TARGETS["C1"]) and rat_eq(C2, TARGETS["C2"])
    res = {"oblique": rat_eq(ob, 0), "wall": rat_eq(wall_lhs, wall_rhs),
           "interior": rat_eq(pde, 0), "coefficients": coef}
    return ItemResult(4, "limit Hessian solves the second-order system", all(res.values()),
                      " ".join(f"{k}={v_}" for k, v_ in res.items()))


def item_sg_parallel():
    sa, sb = sg_prime()
    Gu, Gv = grad_G()
    ta, tb = RatQ(q * v) * c2() * Gv, -RatQ(q * v) * c2() * Gu
    parallel = rat_eq(sa * tb - sb * ta, 0)
    equal = rat_eq(sa, ta) and rat_eq(sb, tb)
    factor = float(proportionality(reduce_r(sa), reduce_r(ta), **_probe_point()))
    return ItemResult(5, "s_g' at the limit is parallel to q v c^2 (G_v, -G_u)", parallel,
                      f"equal={equal}", factor)


def item_sgk():
    sa, sb = sg_prime()
    ku, kv = grad_k()
    return _check(6, "s_g' . grad k at the limit", sa * ku + sb * kv, TARGETS["sgk"])


def item_sk():
    sa, sb = s_prime(TARGETS["Y_u"], TARGETS["Y_v"])
    ku, kv = grad_k()
    return _check(7, "s' . grad k with limit jets", sa * ku + sb * kv, TARGETS["sk"])


def item_dsgG():
    sa, sb = (x.truncate("e", 1) for x in sg_prime(limit=False))
    Gu, Gv = (x.truncate("e", 1) for x in grad_G(limit=False))
    f = (sa * Gu + sb * Gv).truncate("e", 1)
    return _check(8, "d_varrho (s_g' . grad G) at the limit", d_varrho(f), TARGETS["dsgG"])


def item_dF_combination():
    Gr = TARGETS["G_rho"]
    dF = -TARGETS["dsG"] / (Gr * TARGETS["sk"])
    dFg = -TARGETS["dsgG"] / (Gr * TARGETS["sgk"])
    res = {"dF=-c/b-H": rat_eq(dF, RatQ(-c, b) - TARGETS["H"]),
           "dFg=-h": rat_eq(dFg, -TARGETS["h"]),
           "difference": rat_eq(dF - dFg, TARGETS["dF_minus_dFg"]),
           "G_rho": rat_eq(-at_limit(polar_G().diff("e")) / RatQ(-1), Gr)}
    return ItemResult(9, "dF_limit + h equals the combined closed form", all(res.values()),
                      " ".join(f"{k}={v_}" for k, v_ in res.items()))


def item_circle_relation():
    return _check(10, "u[u] + v[v] vanishes at the limit", RatQ(u * (u - q) + v * v), RatQ(0))


ITEMS = (item_oblique_I, item_oblique_J, item_upsilon_grad, item_upsilon_hess,
         item_sg_parallel, item_sgk, item_sk, item_dsgG, item_dF_combination,
         item_circle_relation)

#: Denominators that appear in the targets; must not vanish on the subsonic arc.
def _target_denominators():
    return [t.den for t in TARGETS.values()]


def check_denominators(n: int = 1000, q_val: float = 1.0) -> bool:
    """Evaluate every target denominator at ``n`` points of the subsonic arc.

    The arc is ``u < q / 3`` i.e. slopes ``0 < k < 1/sqrt(2)``; points are
    kept away from the endpoints by 1e-3.
    """
    k = np.linspace(1e-3, np.sqrt(0.5) - 1e-3, n)
    s = 1.0 + k * k
    pt = {"u": q_val * k * k / s, "v": q_val * k / s, "q": q_val, "b": 1.0, "c": 1.0, "e": 0.0}
    for d in _target_denominators():
        val = np.asarray(d.evaluate(**pt)) * np.ones(n)
        if np.any(np.abs(val) < 1e-12):
            return False
    return True


def run_identity_suite() -> SuiteReport:
    """Run all ten items; each reports pass/fail and, on failure, a probe ratio."""
    t0 = time.perf_counter()
    rep = SuiteReport(denominators_ok=check_denominators())
    for fn in ITEMS:
        rep.items.append(fn())
    rep.runtime = time.perf_counter() - t0
    return rep


def reset_targets():
    TARGETS.clear()
    TARGETS.update(DEFAULT_TARGETS)
