"""Slope vectors and the free-boundary slope function.

The wall-position condition says that, along the wall image in the
hodograph plane, ``(du/dv, 1)`` is parallel (same orientation) to

    s' = (y_u, y_v) [[(c^2-v^2) v, (c^2+v^2) u], [-(c^2-v^2) u, (c^2-u^2) v]].

On the shock, where ``(y_u, y_v)`` is constrained by the oblique condition,
the same construction gives the vector ``s_g'`` built from ``(G_u, G_v)`` and
the velocity jumps only.

In ``(k, varrho)`` coordinates a curve with tangent ``s'`` has slope

    d varrho / dk = F = -(s' . grad G) / (G_varrho (s' . grad k)),

and on the polar ``varrho = eps`` the constrained slope is
``F_g = -eps h(k, eps)``.  The ``*_limit`` functions are the
``varrho``-derivatives of these quantities at the limit circle, expressed
through the jets of the limit solution.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coords import G_varrho, KRho, uv_from_kr
from .errors import TangentialSlope, ZeroGradient
from .hodograph import _check_on_polar
from .limit import _point, upsilon_grad
from .model import (FlowConstants, IncomingFlow, Velocity, incoming_from_flux,
                    polar_grad, sound_speed_sq)
from .coords import _flow

TANGENT_TOL = 1e-14
SMALL_EPS = 1e-8


@dataclass(frozen=True)
class SlopeVector:
    """A vector ``(a, b)`` of the hodograph plane (row-vector convention)."""

    a: float
    b: float

    def dot(self, other):
        return self.a * other[0] + self.b * other[1]

    def cross(self, other):
        return self.a * other[1] - self.b * other[0]


def s_prime(U: Velocity, y_u, y_v, fc: FlowConstants) -> SlopeVector:
    """Slope vector of the wall-position condition for gradient ``(y_u, y_v)``."""
    if np.any((np.asarray(y_u) == 0) & (np.asarray(y_v) == 0)):
        raise ZeroGradient("(y_u, y_v) = 0")
    c2 = sound_speed_sq(U, fc)
    u, v = U.u, U.v
    a = c2 - v * v
    return SlopeVector(y_u * a * v - y_v * a * u,
                       y_u * (c2 + v * v) * u + y_v * (c2 - u * u) * v)


def sg_prime(U: Velocity, inflow: IncomingFlow, fc: FlowConstants,
             check: bool = True) -> SlopeVector:
    """Slope vector on the shock built from the polar gradient and jumps."""
    if check:
        _check_on_polar(U, inflow, fc)
    c2 = sound_speed_sq(U, fc)
    u, v = U.u, U.v
    gu, gv = polar_grad(U, inflow, fc)
    ju, jv = u - inflow.u_in, v
    m = u * ju + v * jv
    t = c2 * (v * ju - u * jv)
    return SlopeVector(-(m * (gu * (c2 - v * v) + gv * u * v) + t * gv),
                       -(m * (gu * u * v + gv * (c2 - u * u)) - t * gu))


def grad_k(U: Velocity):
    """``(k_u, k_v) = (1/v, -u/v^2)``."""
    return 1.0 / U.v, -U.u / U.v ** 2


def _slope_from_vector(s: SlopeVector, U: Velocity, varrho, fc: FlowConstants):
    gu, gv = polar_grad(U, _flow(varrho, fc), fc)
    sk = s.dot(grad_k(U))
    if np.any(np.abs(sk) < TANGENT_TOL * (np.abs(s.a) + np.abs(s.b)) / np.abs(U.v)):
        raise TangentialSlope("s' . grad k vanishes")
    return -s.dot((gu, gv)) / (G_varrho(U, varrho, fc) * sk)


def F_of(ratio_yu_yv, kr: KRho, fc: FlowConstants, U: Velocity = None):
    """Free-boundary slope ``F`` for gradient direction ``(ratio, 1)`` at ``kr``.

    ``F`` is invariant under rescaling of ``(y_u, y_v)``, so only the ratio
    enters.  ``U`` may be passed when the point is already known.
    """
    if U is None:
        U = uv_from_kr(kr, fc)
    s = s_prime(U, ratio_yu_yv, np.ones_like(np.asarray(ratio_yu_yv, dtype=float)), fc)
    return _slope_from_vector(s, U, kr.varrho, fc)


def F_of_gradient(y_u, y_v, U: Velocity, varrho, fc: FlowConstants):
    """``F`` for an explicit gradient (avoids dividing by a small ``y_v``)."""
    return _slope_from_vector(s_prime(U, y_u, y_v, fc), U, varrho, fc)


def Fg_of(k, eps, fc: FlowConstants):
    """Constrained slope ``F_g`` on the polar of flux ``eps`` (``= -eps h``)."""
    inflow = incoming_from_flux(eps, fc)
    from .model import polar_point
    U = polar_point(k, inflow, fc)
    return _slope_from_vector(sg_prime(U, inflow, fc), U, eps, fc)


# --- closed forms on the limit circle ----------------------------------------

def _uv(k, fc):
    U = _point(k, fc)
    return fc.q_bar, U.u, U.v


def h_limit(k, fc: FlowConstants):
    """``h(k, 0) = 2 (q - 2u) v / (u (2q + u))``."""
    q, u, v = _uv(k, fc)
    return 2.0 * (q - 2.0 * u) * v / (u * (2.0 * q + u))


def h_of(k, eps, fc: FlowConstants):
    """``h(k, eps) = (s_g' . grad G) / (eps G_varrho (s_g' . grad k))`` on the polar.

    For ``eps < 1e-8`` the removable limit ``h(k, 0)`` is returned.
    """
    if eps < SMALL_EPS:
        return h_limit(k, fc)
    return -Fg_of(k, eps, fc) / eps


def H_of(k, fc: FlowConstants):
    """``(2q^2 + 7qu - 12u^2) v / (u (2q + u)(q - 2u))``."""
    q, u, v = _uv(k, fc)
    return (2 * q * q + 7 * q * u - 12 * u * u) * v / (u * (2 * q + u) * (q - 2 * u))


def _B_ratio(k, W):
    _, B1, B2 = W.eval(k)
    return B2 / B1


def dF_limit(k, W, fc: FlowConstants):
    """``d F / d varrho`` at the circle with the limit-solution gradient: ``-B''/B' - H``."""
    return -_B_ratio(k, W) - H_of(k, fc)


def dFg_limit(k, fc: FlowConstants):
    """``d F_g / d varrho`` at the circle, up to sign convention: equals ``h(k, 0)``."""
    return h_limit(k, fc)


def dF_minus_dFg_limit(k, W, fc: FlowConstants):
    """``-B''/B' - 5 (3q - 4u) v / ((q - 2u)(2q + u))``."""
    q, u, v = _uv(k, fc)
    return -_B_ratio(k, W) - 5.0 * (3 * q - 4 * u) * v / ((q - 2 * u) * (2 * q + u))


def G_varrho_limit(k, fc: FlowConstants):
    """``(4q + 2u) / q^2``."""
    q, u, _ = _uv(k, fc)
    return (4 * q + 2 * u) / q ** 2


def sk_limit(k, W, fc: FlowConstants):
    """``s' . grad k`` at the circle with the limit gradient: ``B' q^2 u / (2 (q-u) v)``."""
    q, u, v = _uv(k, fc)
    _, B1, _ = W.eval(k)
    return B1 * q * q * u / (2 * (q - u) * v)


def sgk_limit(k, fc: FlowConstants):
    """``s_g' . grad k`` at the circle: ``q^3 u (q - u) / (2 v)``."""
    q, u, v = _uv(k, fc)
    return q ** 3 * u * (q - u) / (2 * v)


def dsg_dG_limit(k, fc: FlowConstants):
    """``d/dvarrho (s_g' . grad G)`` at the circle: ``2 q (q - 2u)(q - u)``."""
    q, u, _ = _uv(k, fc)
    return 2 * q * (q - 2 * u) * (q - u)


def ds_dG_limit(k, W, fc: FlowConstants):
    """``d/dvarrho (s' . grad G)`` at the circle with limit jets.

    ``B'' (2q + u) v / (q - u)^2 + B' (2q^2 + 7qu - 12u^2) / ((q - 2u)(q - u))``.
    """
    q, u, v = _uv(k, fc)
    _, B1, B2 = W.eval(k)
    return (B2 * (2 * q + u) * v / (q - u) ** 2
            + B1 * (2 * q * q + 7 * q * u - 12 * u * u) / ((q - 2 * u) * (q - u)))


def limit_ratio(k, W, fc: FlowConstants):
    """``Upsilon_u / Upsilon_v`` on the circle (independent of ``B'``)."""
    gu, gv = upsilon_grad(k, W, fc)
    return gu / gv
