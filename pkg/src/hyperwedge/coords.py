"""Curvilinear coordinates ``(k, rho_f)`` around the limit circle.

``k = u / v`` is the polar slope and the flux coordinate ``varrho`` is the
incoming mass flux whose shock polar passes through ``(u, v)``, i.e. the
implicit solution of ``G(u, v, varrho) = 0``.  The polar for flux ``eps``
is therefore the coordinate line ``varrho = eps`` and the limit circle is
``varrho = 0``.

Sign convention
---------------
Differentiating ``G = (u - r/rho)(u - u_in(r)) + v^2`` in ``r`` gives

    G_r = (u_in - u) / rho - u_in'(r) (u - r / rho),

which is *positive* near the limit circle (``(4 q_bar + 2u) / q_bar^2`` at
``r = 0``) and agrees with finite differences.  The same expression with the
opposite overall sign is available as :func:`G_varrho_as_displayed`; all
downstream formulas use :func:`G_varrho`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadState, NoConvergence
from .model import (NEWTON_MAXIT, FlowConstants, IncomingFlow, Velocity,
                    inflow_speed, inflow_speed_derivs, polar_G, polar_grad,
                    polar_ray_root)

#: Half-width of the tube (as a fraction of ``eps_max``) in which the
#: coordinates are used.  See the decisions ledger for the choice.
TUBE_FRACTION = 0.25


@dataclass(frozen=True)
class KRho:
    """A point in ``(k, varrho)`` coordinates."""

    k: float
    varrho: float


@dataclass(frozen=True)
class KRhoJacobian:
    """Forward ``d(k, varrho)/d(u, v)`` and inverse ``d(u, v)/d(k, varrho)``."""

    k_u: float
    k_v: float
    r_u: float
    r_v: float
    u_k: float
    u_r: float
    v_k: float
    v_r: float

    @property
    def forward(self):
        return np.array([[self.k_u, self.k_v], [self.r_u, self.r_v]])

    @property
    def inverse(self):
        return np.array([[self.u_k, self.u_r], [self.v_k, self.v_r]])


def _flow(r, fc):
    w, w1, w2 = inflow_speed_derivs(r, fc)
    if np.ndim(r) == 0:
        return IncomingFlow(float(r), float(w), 0.0, float(w1), float(w2))
    return IncomingFlow(np.asarray(r, dtype=float), w, 0.0, w1, w2)


def G_varrho(U: Velocity, varrho, fc: FlowConstants):
    """Derivative of the polar function in the flux parameter.

    ``(u_in - u) / rho - u_in' (u - varrho / rho)`` with ``u_in'`` from
    implicit differentiation of the flux relation.
    """
    rho = 0.25 * (fc.q_bar ** 2 - U.q2)
    w, w1, _ = inflow_speed_derivs(varrho, fc)
    return (w - U.u) / rho - w1 * (U.u - varrho / rho)


def G_varrho_as_displayed(U: Velocity, varrho, fc: FlowConstants):
    """The flux derivative with the opposite overall sign (negative near the circle)."""
    return -G_varrho(U, varrho, fc)


def _G(u, v, r, fc):
    w = inflow_speed(r, fc)
    rho = 0.25 * (fc.q_bar ** 2 - u * u - v * v)
    return (u - r / rho) * (u - w) + v * v


def tube_radius(fc: FlowConstants) -> float:
    return TUBE_FRACTION * fc.eps_max


def varrho_of(U: Velocity, fc: FlowConstants):
    """Flux coordinate of ``U`` (vectorised Newton iteration from 0)."""
    u = np.asarray(U.u, dtype=float)
    v = np.asarray(U.v, dtype=float)
    if np.any(u * u + v * v >= fc.q_bar ** 2):
        raise NoConvergence("state outside the limit disc")
    cap = tube_radius(fc)
    r = np.zeros(np.broadcast(u, v).shape)
    for _ in range(NEWTON_MAXIT):
        if np.any(np.abs(r) > cap):
            raise NoConvergence("flux coordinate left the working tube")
        g = _G(u, v, r, fc)
        step = g / G_varrho(Velocity(u, v), r, fc)
        r = r - step
        if np.all(np.abs(step) <= 1e-13 * fc.q_bar ** 3 * fc.eps_max / fc.q_bar ** 3):
            r = r - _G(u, v, r, fc) / G_varrho(Velocity(u, v), r, fc)
            break
    else:
        raise NoConvergence("flux coordinate Newton iteration")
    if np.any(np.abs(r) > cap):
        raise NoConvergence("flux coordinate outside the working tube")
    return r if r.ndim else float(r)


def k_of(U: Velocity):
    return U.u / U.v


def uv_from_kr(kr: KRho, fc: FlowConstants) -> Velocity:
    """Inverse map: solve the polar with flux ``varrho`` on the ray ``u = k v``."""
    if np.any(np.abs(np.asarray(kr.varrho)) > tube_radius(fc)):
        raise NoConvergence("flux coordinate outside the working tube")
    v = polar_ray_root(kr.k, kr.varrho, fc)
    return Velocity(kr.k * v, v)


def jacobian(U: Velocity, varrho, fc: FlowConstants) -> KRhoJacobian:
    """Jacobians at a general point with known flux coordinate."""
    u, v = U.u, U.v
    if np.any(np.asarray(v) <= 0):
        raise BadState("v must be positive")
    gu, gv = polar_grad(U, _flow(varrho, fc), fc)
    gr = G_varrho(U, varrho, fc)
    ku, kv = 1.0 / v, -u / v ** 2
    ru, rv = -gu / gr, -gv / gr
    det = ku * rv - kv * ru
    return KRhoJacobian(ku, kv, ru, rv, rv / det, -kv / det, -ru / det, ku / det)


def jacobian_at(U: Velocity, fc: FlowConstants) -> KRhoJacobian:
    """Closed-form Jacobians on the limit circle (``varrho = 0``)."""
    q = fc.q_bar
    u, v = U.u, U.v
    if np.any(np.asarray(v) <= 0):
        raise BadState("v must be positive")
    ku, kv = 1.0 / v, -u / v ** 2
    ru = q * q * (q - 2.0 * u) / (2.0 * (2.0 * q + u))
    rv = -q * q * v / (2.0 * q + u)
    pre = 2.0 * (q - u) * (2.0 * q + u) / q ** 3
    return KRhoJacobian(ku, kv, ru, rv,
                        pre * q * q * v / (2.0 * q + u), pre * (-u / v ** 2),
                        pre * q * q * (q - 2.0 * u) / (2.0 * (2.0 * q + u)), pre * (-1.0 / v))


def d_varrho_limit(U: Velocity, f_u, f_v, fc: FlowConstants):
    """``d/dvarrho`` at fixed ``k`` on the limit circle applied to ``f``.

    ``-2 (2 q_bar + u) / (q_bar^3 u) * (u f_u + v f_v)``.
    """
    u = np.asarray(U.u)
    if np.any(u <= 0):
        raise BadState("u must be positive")
    q = fc.q_bar
    return -2.0 * (2.0 * q + U.u) / (q ** 3 * U.u) * (U.u * f_u + U.v * f_v)


@dataclass(frozen=True)
class RayDerivatives:
    """``v(k, r)`` on the ray ``u = k v`` and its derivatives up to order 2."""

    v: np.ndarray
    v_k: np.ndarray
    v_r: np.ndarray
    v_kk: np.ndarray
    v_kr: np.ndarray
    v_rr: np.ndarray


def ray_derivatives(k, r, fc: FlowConstants) -> RayDerivatives:
    """Implicit derivatives of the polar root ``v(k, r)``.

    With ``s = 1 + k^2``, ``f1 = q_bar^2 - s v^2``, ``f2 = s v^2 - k w v`` and
    ``e = -r (k v - w)`` (``w = u_in(r)``) the root solves
    ``P = f1 f2 / 4 + e = 0``; all partial derivatives of ``P`` are
    polynomial so the first and second derivatives of ``v`` follow from the
    implicit function theorem.
    """
    k = np.asarray(k, dtype=float)
    r = np.asarray(r, dtype=float)
    v = polar_ray_root(k, r, fc)
    w, w1, w2 = inflow_speed_derivs(r, fc)
    qb2 = fc.q_bar ** 2
    s = 1.0 + k * k
    zero = np.zeros_like(v)
    f1 = qb2 - s * v * v
    f2 = s * v * v - k * w * v
    # first partials: index order (v, k, r)
    f1d = (-2.0 * s * v, -2.0 * k * v * v, zero)
    f2d = (2.0 * s * v - k * w, 2.0 * k * v * v - w * v, -k * v * w1)
    ed = (-r * k + zero, -r * v, -k * v + w + r * w1)
    # second partials as dict keyed by sorted index pairs
    f1dd = {(0, 0): -2.0 * s + zero, (0, 1): -4.0 * k * v, (1, 1): -2.0 * v * v,
            (0, 2): zero, (1, 2): zero, (2, 2): zero}
    f2dd = {(0, 0): 2.0 * s + zero, (0, 1): 4.0 * k * v - w, (1, 1): 2.0 * v * v,
            (0, 2): -k * w1 + zero, (1, 2): -v * w1, (2, 2): -k * v * w2}
    edd = {(0, 0): zero, (0, 1): -r + zero, (1, 1): zero,
           (0, 2): -k + zero, (1, 2): -v, (2, 2): 2.0 * w1 + r * w2 + zero}

    def P1(a):
        return 0.25 * (f1d[a] * f2 + f1 * f2d[a]) + ed[a]

    def P2(a, b):
        key = (min(a, b), max(a, b))
        return 0.25 * (f1dd[key] * f2 + f1d[a] * f2d[b] + f1d[b] * f2d[a]
                       + f1 * f2dd[key]) + edd[key]

    Pv = P1(0)
    vk = -P1(1) / Pv
    vr = -P1(2) / Pv
    d1 = {1: vk, 2: vr}

    def second(a, b):
        return -(P2(a, b) + P2(a, 0) * d1[b] + P2(b, 0) * d1[a]
                 + P2(0, 0) * d1[a] * d1[b]) / Pv

    return RayDerivatives(v, vk, vr, second(1, 1), second(1, 2), second(2, 2))
