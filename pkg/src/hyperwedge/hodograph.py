"""Hodograph-plane equation for the stream coordinate ``y(u, v)``.

After the hodograph transformation the potential-flow system becomes a
linear second-order equation for ``y``::

    (c^2 - v^2) y_uu + 2uv y_uv + (c^2 - u^2) y_vv + C1 y_u + C2 y_v = 0,

with (gamma = 2)::

    C1 = (4 v^2 + 2 c^2) u / (c^2 - v^2),
    C2 = ((2 c^2 - q^2) - 2 (u^2 - v^2)) v / (c^2 - v^2).

The coefficient of the mixed derivative ``y_uv`` is ``2uv`` so the symmetric
coefficient matrix is ``[[c^2-v^2, uv], [uv, c^2-u^2]]`` whose determinant is
``c^2 (c^2 - q^2)``: the equation is elliptic exactly where ``q < c``.

Along the shock the Rankine-Hugoniot relations give an oblique derivative
condition ``I y_u + J y_v = 0``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCoefficient, NotOnPolar
from .model import (FlowConstants, IncomingFlow, Velocity, density, polar_G,
                    polar_grad, sound_speed_sq)

DEGENERACY_TOL = 1e-12
POLAR_TOL = 1e-10


@dataclass(frozen=True)
class PdeCoeffs:
    """Coefficients of ``a_uu y_uu + a_uv y_uv + a_vv y_vv + b_u y_u + b_v y_v``."""

    a_uu: float
    a_uv: float
    a_vv: float
    b_u: float
    b_v: float

    @property
    def discriminant(self):
        """``(a_uv/2)^2 - a_uu a_vv``; negative where the equation is elliptic."""
        return 0.25 * self.a_uv ** 2 - self.a_uu * self.a_vv


@dataclass(frozen=True)
class ObliqueCoeffs:
    """Coefficients of the boundary operator ``I y_u + J y_v``."""

    I: float
    J: float

    def cross(self, other: "ObliqueCoeffs"):
        """2-D cross product; zero when the two directions are parallel."""
        return self.I * other.J - self.J * other.I

    def oriented(self, normal):
        """Return the coefficients flipped so that ``(I, J) . normal >= 0``."""
        nu, nv = normal
        sgn = np.where(self.I * nu + self.J * nv < 0, -1.0, 1.0)
        return ObliqueCoeffs(sgn * self.I, sgn * self.J)


def _denominator(U: Velocity, c2):
    d = c2 - U.v * U.v
    if np.any(np.abs(d) < DEGENERACY_TOL):
        raise DegenerateCoefficient("c^2 - v^2 vanishes")
    return d


def interior_coeffs(U: Velocity, fc: FlowConstants) -> PdeCoeffs:
    """Coefficients of the hodograph equation at ``U`` (gamma = 2)."""
    c2 = sound_speed_sq(U, fc)
    u, v = U.u, U.v
    d = _denominator(U, c2)
    C1 = (4.0 * v * v + 2.0 * c2) * u / d
    C2 = ((2.0 * c2 - (u * u + v * v)) - 2.0 * (u * u - v * v)) * v / d
    return PdeCoeffs(c2 - v * v, 2.0 * u * v, c2 - u * u, C1, C2)


def _check_on_polar(U, inflow, fc):
    G = polar_G(U, inflow, fc)
    if np.any(np.abs(G) > POLAR_TOL * fc.q_bar ** 2):
        raise NotOnPolar(f"|G| = {np.max(np.abs(G)):.3e} exceeds tolerance")


def shock_oblique_coeffs(U: Velocity, inflow: IncomingFlow,
                         fc: FlowConstants, check: bool = True) -> ObliqueCoeffs:
    """Oblique coefficients ``(I, J)`` with velocity jumps ``[u], [v]``."""
    if check:
        _check_on_polar(U, inflow, fc)
    c2 = sound_speed_sq(U, fc)
    u, v = U.u, U.v
    gu, gv = polar_grad(U, inflow, fc)
    ju, jv = u - inflow.u_in, v
    a = c2 - v * v
    I = gu * a * ju - gv * a * jv + gv * ju * (2.0 * u * v)
    J = gu * a * jv + gv * (c2 - u * u) * ju
    return ObliqueCoeffs(I, J)


def oblique_alt_form(U: Velocity, inflow: IncomingFlow,
                     fc: FlowConstants, check: bool = True) -> ObliqueCoeffs:
    """Oblique coefficients written with the mass-flux jumps ``[rho u], [rho v]``."""
    if check:
        _check_on_polar(U, inflow, fc)
    c2 = sound_speed_sq(U, fc)
    rho = density(U, fc)
    u, v = U.u, U.v
    gu, gv = polar_grad(U, inflow, fc)
    jru = rho * u - inflow.eps
    jrv = rho * v
    a = c2 - v * v
    I = gu * a * jrv + gv * a * jru + gv * jrv * (2.0 * u * v)
    J = -gu * a * jru + gv * (c2 - u * u) * jrv
    return ObliqueCoeffs(I, J)


def x_gradient_from_y(U: Velocity, y_u, y_v, fc: FlowConstants):
    """Recover ``(x_u, x_v)`` from ``(y_u, y_v)``.

    ``x_u = -(2uv y_u + (c^2 - u^2) y_v) / (c^2 - v^2)`` and ``x_v = y_u``.
    """
    c2 = sound_speed_sq(U, fc)
    d = _denominator(U, c2)
    u, v = U.u, U.v
    x_u = -(2.0 * u * v * y_u + (c2 - u * u) * y_v) / d
    return x_u, y_u
