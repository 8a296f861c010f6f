"""Jets of the limit solution on the limit circle.

At zero incoming flux the shock polar and the wall image coincide with the
circle ``u^2 + v^2 = q_bar u``.  The limit solution ``Upsilon`` is the
solution whose first and second derivatives along that circle are fixed by
the oblique shock condition, the wall data ``Upsilon = B(u/v)`` and the
interior equation.  Only these jets are needed downstream.

Closed forms are used in production code; ``*_oracle`` functions solve the
underlying linear systems numerically and serve as independent checks.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularSystem, SonicDegeneracy
from .model import FlowConstants, Velocity, limit_polar_point

SONIC_GUARD = 1e-6


@dataclass(frozen=True)
class UpsilonJet:
    """First and second derivatives of the limit solution at slope ``k``."""

    k: float
    U: Velocity
    grad: tuple
    hess: tuple


def _point(k, fc: FlowConstants):
    U = limit_polar_point(k, fc)
    if np.any(U.u >= fc.q_bar / 3.0 - SONIC_GUARD * fc.q_bar):
        raise SonicDegeneracy("slope too close to the sonic point")
    return U


def _B12(k, W):
    _, B1, B2 = W.eval(k)
    return B1, B2


def upsilon_grad(k, W, fc: FlowConstants):
    """``B'(k) (3v/(q-u)^2, (q-6u)/((q-2u)(q-u)))``."""
    U = _point(k, fc)
    q, u, v = fc.q_bar, U.u, U.v
    B1, _ = _B12(k, W)
    return B1 * 3.0 * v / (q - u) ** 2, B1 * (q - 6.0 * u) / ((q - 2.0 * u) * (q - u))


def upsilon_hess(k, W, fc: FlowConstants):
    """Closed-form ``(Upsilon_uu, Upsilon_uv, Upsilon_vv)``; linear in ``B', B''``."""
    U = _point(k, fc)
    q, u, v = fc.q_bar, U.u, U.v
    B1, B2 = _B12(k, W)
    a, b = q - u, q - 2.0 * u
    yuu = -(q - 11.0 * u) * B2 / a ** 3 + 4.0 * v * (2.0 * q - 3.0 * u) * (q + 4.0 * u) * B1 / (a ** 3 * b * q)
    yuv = ((5.0 * q - 22.0 * u) * v * B2 / (a ** 3 * b)
           + (3 * q ** 3 - 16 * u * q ** 2 - 52 * u ** 2 * q + 96 * u ** 3) * B1 / (q * a ** 2 * b ** 2))
    yvv = ((q * q - 16.0 * u * q + 44.0 * u * u) * B2 / (a ** 2 * b ** 2)
           - 4.0 * v * (3 * q ** 3 - 6 * u * q ** 2 - 32 * u ** 2 * q + 48 * u ** 3) * B1 / (q * a ** 2 * b ** 3))
    return yuu, yuv, yvv


def upsilon_jet(k, W, fc: FlowConstants) -> UpsilonJet:
    return UpsilonJet(k, limit_polar_point(k, fc), upsilon_grad(k, W, fc), upsilon_hess(k, W, fc))


# --- oracles -----------------------------------------------------------------

def _solve(M, rhs, what):
    if abs(np.linalg.det(M)) < 1e-14 * np.linalg.norm(M) ** M.shape[0]:
        raise SingularSystem(f"{what} system is singular")
    return np.linalg.solve(M, rhs)


def grad_system(k, W, fc: FlowConstants):
    """Matrix and right-hand side of the first-order system at scalar ``k``.

    Rows: oblique shock condition on the circle and the differentiated wall
    condition.
    """
    U = _point(k, fc)
    q, u, v = fc.q_bar, float(U.u), float(U.v)
    B1, _ = _B12(k, W)
    M = np.array([[(u - q) * (6 * u - q), 3 * (2 * u - q) * v],
                  [2 * v, q - 2 * u]])
    rhs = np.array([0.0, float(B1) * q / (q - u)])
    return M, rhs


def upsilon_grad_oracle(k, W, fc: FlowConstants):
    """Numerical 2x2 solve for ``(Upsilon_u, Upsilon_v)``."""
    M, rhs = grad_system(k, W, fc)
    sol = _solve(M, rhs, "first-order")
    return float(sol[0]), float(sol[1])


def hess_system(k, W, fc: FlowConstants, grad=None):
    """Matrix and right-hand side of the 3x3 second-order system.

    Rows: tangential derivative of the oblique condition, second tangential
    derivative of the wall condition, and the interior equation restricted
    to the circle.  ``grad`` defaults to the oracle gradient.
    """
    U = _point(k, fc)
    q, u, v = fc.q_bar, float(U.u), float(U.v)
    _, B1, B2 = (float(x) for x in W.eval(k))
    gu, gv = upsilon_grad_oracle(k, W, fc) if grad is None else grad
    M = np.array([
        [2 * v * (q - u) * (q - 6 * u), (q - u) * (q - 12 * u) * (q - 2 * u), -3 * (q - 2 * u) ** 2 * v],
        [4 * v * v, 4 * v * (q - 2 * u), (q - 2 * u) ** 2],
        [(u - q) * (2 * u - q) / 2, 2 * u * v, (u + q) * (q - 2 * u) / 2],
    ])
    rhs = np.array([
        -2 * v * (12 * u - 7 * q) * gu + 3 * (8 * u * u - 8 * u * q + q * q) * gv,
        2 * (2 * u - q) * gu + 4 * v * gv + B2 * q * q / (q - u) ** 2 + B1 * 2 * q * v / (q - u) ** 2,
        -2 * u * (4 * u + q) / (q - 2 * u) * gu - 2 * (q + 2 * u) * v / (q - u) * gv,
    ])
    return M, rhs


def upsilon_hess_oracle(k, W, fc: FlowConstants):
    """Numerical 3x3 solve for ``(Upsilon_uu, Upsilon_uv, Upsilon_vv)``."""
    M, rhs = hess_system(k, W, fc)
    sol = _solve(M, rhs, "second-order")
    return tuple(float(x) for x in sol)


def wall_position_residual(k, y_u, y_v, fc: FlowConstants):
    """Residual of the wall-position relation on the circle.

    Returns ``lhs - rhs`` of
    ``-(v (u+q)(q-2u)/2 y_v + (q-u)(q+2u)/2 u y_u) du/dv
    = (u-q)(2u-q)/2 (u y_v - v y_u)`` with ``du/dv = -2v/(2u-q)``.
    """
    U = limit_polar_point(k, fc)
    q, u, v = fc.q_bar, U.u, U.v
    dudv = -2.0 * v / (2.0 * u - q)
    lhs = -(v * (u + q) * (q - 2 * u) / 2 * y_v + (q - u) * (q + 2 * u) / 2 * u * y_u) * dudv
    rhs = (u - q) * (2 * u - q) / 2 * (u * y_v - v * y_u)
    return lhs - rhs
