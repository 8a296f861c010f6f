"""Gas relations for gamma = 2, the incoming flow and the shock polar.

For gamma = 2 the Bernoulli law closes as

    rho = (q_bar^2 - q^2) / 4,        c^2 = (q_bar^2 - q^2) / 2 = 2 rho,

where ``q_bar`` is the limit speed.  The incoming horizontal stream has speed
``u_in`` and density ``rho_in`` with mass flux ``eps = rho_in * u_in``.  The
shock polar through the incoming state is the zero set of

    G(u, v; eps) = (u - eps / rho(u, v)) (u - u_in(eps)) + v^2,

which degenerates for ``eps = 0`` to the limit circle ``u^2 + v^2 = q_bar u``.

All functions accept scalars or numpy arrays for the velocity components.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import (BadSlope, EntropyViolation, FluxTooLarge, NoConvergence,
                     NonPhysicalState)

NEWTON_TOL = 1e-13
NEWTON_MAXIT = 50


@dataclass(frozen=True)
class FlowConstants:
    """Constants of the gas model.

    Parameters
    ----------
    q_bar : float
        Limit speed.  Every formula is homogeneous in ``q_bar``.
    gamma : float
        Adiabatic index.  Only ``gamma == 2`` is supported.
    """

    q_bar: float = 1.0
    gamma: float = 2.0

    def __post_init__(self):
        if not (np.isfinite(self.q_bar) and self.q_bar > 0):
            raise ValueError(f"q_bar must be positive, got {self.q_bar!r}")
        if self.gamma != 2:
            raise ValueError("only gamma = 2 is supported")

    @property
    def sonic_speed(self) -> float:
        """Critical sound speed ``q_bar / sqrt(3)``."""
        return self.q_bar / np.sqrt(3.0)

    @cached_property
    def eps_max(self) -> float:
        """Maximum of ``(q_bar^2 - w^2) w / 4`` over ``0 < w < q_bar``.

        Attained at ``w = q_bar / sqrt(3)``; equals ``q_bar^3 / (6 sqrt 3)``.
        """
        w = self.sonic_speed
        return 0.25 * (self.q_bar ** 2 - w * w) * w


@dataclass(frozen=True)
class Velocity:
    """A point of the hodograph plane (scalar or array components)."""

    u: float
    v: float

    @property
    def q2(self):
        return self.u * self.u + self.v * self.v

    @property
    def k(self):
        """Polar slope parameter ``u / v``."""
        return self.u / self.v


@dataclass(frozen=True)
class IncomingFlow:
    """Incoming horizontal flow parameterised by its mass flux ``eps``."""

    eps: float
    u_in: float
    rho_in: float
    du_deps: float = field(default=0.0, compare=False)
    d2u_deps2: float = field(default=0.0, compare=False)


def _check_physical(q2, fc: FlowConstants):
    if np.any(np.asarray(q2) >= fc.q_bar ** 2):
        raise NonPhysicalState("speed reaches the limit speed; density <= 0")


def density(U: Velocity, fc: FlowConstants):
    """Mass density ``(q_bar^2 - u^2 - v^2) / 4``."""
    q2 = U.q2
    _check_physical(q2, fc)
    return 0.25 * (fc.q_bar ** 2 - q2)


def sound_speed_sq(U: Velocity, fc: FlowConstants):
    """Squared sound speed ``(q_bar^2 - u^2 - v^2) / 2``."""
    q2 = U.q2
    _check_physical(q2, fc)
    return 0.5 * (fc.q_bar ** 2 - q2)


# --- incoming flow -----------------------------------------------------------

def _flux(w, qb):
    return 0.25 * (qb * qb - w * w) * w


def inflow_speed(r, fc: FlowConstants):
    """Subsonic-branch root ``u_in(r)`` of ``(q_bar^2 - w^2) w / 4 = r``.

    Vectorised helper (no range check beyond ``r < eps_max``); Newton from
    ``w = q_bar`` decreases monotonically to the root because the flux is
    concave and decreasing on ``[q_bar/sqrt(3), q_bar]``.  Negative ``r``
    (used when Newton iterates overshoot the polar) gives ``w > q_bar``.
    """
    qb = fc.q_bar
    r = np.asarray(r, dtype=float)
    if np.any(r >= fc.eps_max):
        raise FluxTooLarge(f"flux {np.max(r)} >= eps_max {fc.eps_max}")
    w = np.full_like(r, qb)
    for _ in range(NEWTON_MAXIT):
        f = _flux(w, qb) - r
        fp = 0.25 * (qb * qb - 3.0 * w * w)
        step = f / fp
        w = w - step
        if np.all(np.abs(f) < NEWTON_TOL * qb ** 3):
            break
    else:
        raise NoConvergence("inflow speed Newton iteration")
    return w if w.ndim else float(w)


def inflow_speed_derivs(r, fc: FlowConstants):
    """Return ``(u_in, u_in', u_in'')`` as functions of the flux ``r``.

    From ``(q_bar^2 - 3w^2) w' = 4``: ``w' = 4 / (q_bar^2 - 3 w^2)`` and
    ``w'' = 24 w w' / (q_bar^2 - 3 w^2)^2 = (3/2) w w'^3``.
    """
    w = inflow_speed(r, fc)
    d = fc.q_bar ** 2 - 3.0 * np.asarray(w) ** 2
    w1 = 4.0 / d
    w2 = 1.5 * w * w1 ** 3
    return w, w1, w2


def incoming_from_flux(eps: float, fc: FlowConstants) -> IncomingFlow:
    """Incoming state with mass flux ``eps``.

    Raises
    ------
    FluxTooLarge
        If ``eps`` is negative or not below ``fc.eps_max``.
    """
    eps = float(eps)
    if not (0.0 <= eps < fc.eps_max):
        raise FluxTooLarge(f"eps={eps} outside [0, {fc.eps_max})")
    if eps == 0.0:
        w, w1, w2 = fc.q_bar, -2.0 / fc.q_bar ** 2, -12.0 / fc.q_bar ** 5
        return IncomingFlow(0.0, w, 0.0, w1, w2)
    w, w1, w2 = inflow_speed_derivs(eps, fc)
    return IncomingFlow(eps, float(w), eps / float(w), float(w1), float(w2))


# --- shock polar -------------------------------------------------------------

def polar_G(U: Velocity, inflow: IncomingFlow, fc: FlowConstants):
    """Shock polar function ``(u - eps/rho)(u - u_in) + v^2``."""
    rho = density(U, fc)
    return (U.u - inflow.eps / rho) * (U.u - inflow.u_in) + U.v * U.v


def polar_grad(U: Velocity, inflow: IncomingFlow, fc: FlowConstants):
    """Analytic ``(G_u, G_v)`` including the dependence of ``rho`` on (u, v).

    With ``rho_u = -u/2`` and ``rho_v = -v/2``::

        G_u = (1 - eps u / (2 rho^2)) (u - u_in) + (u - eps / rho)
        G_v = 2 v - eps v (u - u_in) / (2 rho^2)
    """
    rho = density(U, fc)
    e = inflow.eps
    du = U.u - inflow.u_in
    gu = (1.0 - e * U.u / (2.0 * rho * rho)) * du + (U.u - e / rho)
    gv = 2.0 * U.v - e * U.v * du / (2.0 * rho * rho)
    return gu, gv


def _check_slope(k, upper):
    k = np.asarray(k, dtype=float)
    if np.any(~np.isfinite(k)) or np.any(k <= 0) or np.any(k >= upper):
        raise BadSlope(f"slope k outside (0, {upper:.6g})")


def limit_polar_point(k, fc: FlowConstants) -> Velocity:
    """Point of the limit circle ``u^2 + v^2 = q_bar u`` with ``u / v = k``."""
    _check_slope(k, np.sqrt(0.5))
    s = 1.0 + k * k
    return Velocity(fc.q_bar * k * k / s, fc.q_bar * k / s)


def _ray_newton(k, r, ub, v, qb2):
    s = 1.0 + k * k
    for _ in range(NEWTON_MAXIT):
        f1 = qb2 - s * v * v
        f2 = s * v * v - k * ub * v
        P = 0.25 * f1 * f2 - r * (k * v - ub)
        Pv = 0.25 * (-2.0 * s * v * f2 + f1 * (2.0 * s * v - k * ub)) - r * k
        step = P / Pv
        v = v - step
        if not np.all(np.isfinite(v)):
            return None
        if np.all(np.abs(step) <= 1e-13 * np.abs(v)):
            # one more step polishes to round-off (quadratic convergence)
            f1 = qb2 - s * v * v
            f2 = s * v * v - k * ub * v
            P = 0.25 * f1 * f2 - r * (k * v - ub)
            Pv = 0.25 * (-2.0 * s * v * f2 + f1 * (2.0 * s * v - k * ub)) - r * k
            return v - P / Pv
    return None


def polar_ray_root(k, r, fc: FlowConstants, v0=None, substeps: int = 16):
    """Solve the polar on the ray ``u = k v`` for parameter ``r`` (vectorised).

    On the ray the polar multiplied by ``rho`` is the quartic

        P(v) = (q_bar^2 - s v^2)(s v^2 - k u_in v) / 4 - r (k v - u_in),

    with ``s = 1 + k^2``.  The physical root continues ``k u_in / s``; the
    spurious root ``q_bar / sqrt(s)`` is the vacuum state.  ``r`` may be
    negative (points outside the limit circle) as long as it stays small.

    The physical root merges with a second root when ``r`` approaches
    roughly ``k^2 q_bar^3 / 16``; beyond that the ray misses the polar.
    If plain Newton fails, the root is continued in ``r`` from 0.
    Returns ``v``.
    """
    qb2 = fc.q_bar ** 2
    k, r = np.broadcast_arrays(np.asarray(k, dtype=float), np.asarray(r, dtype=float))
    ub = inflow_speed(r, fc)
    s = 1.0 + k * k
    guess = k * ub / s if v0 is None else np.array(v0, dtype=float, copy=True)
    v = _ray_newton(k, r, ub, guess, qb2)
    if v is not None and np.all((v > 0) & (s * v * v < qb2)):
        return v
    v = k * fc.q_bar / s
    for t in np.linspace(0.0, 1.0, substeps + 1)[1:]:
        rt = t * r
        v = _ray_newton(k, rt, inflow_speed(rt, fc), v, qb2)
        if v is None:
            raise NoConvergence("polar point Newton iteration did not converge "
                                "(flux too large for this slope?)")
    return v


def polar_point(k, inflow: IncomingFlow, fc: FlowConstants) -> Velocity:
    """Point of the polar with ``u / v = k`` for the given incoming flow.

    Newton continuation from the limit-circle point; the result satisfies
    the entropy condition ``u_in > q``.
    """
    _check_slope(k, np.sqrt(0.5))
    if inflow.eps == 0.0:
        return limit_polar_point(k, fc)
    v = polar_ray_root(k, inflow.eps, fc)
    U = Velocity(k * v, v)
    G = polar_G(U, inflow, fc)
    if np.any(np.abs(G) > 1e3 * NEWTON_TOL * fc.q_bar ** 2):
        raise NoConvergence("polar point residual too large")
    if np.any(np.sqrt(U.q2) >= inflow.u_in):
        raise EntropyViolation("downstream speed exceeds incoming speed")
    return U
