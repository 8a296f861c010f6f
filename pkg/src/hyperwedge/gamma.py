"""Approximate free boundary ``varrho = Gamma(k)``.

``Gamma`` solves the linear ODE

    Gamma' = (-B''/B' - H(k)) (Gamma - eps) - eps h(k, eps),   Gamma(flat) = eps,

whose integrating factor ``B'(k) exp(int H)`` gives the closed form

    Gamma - eps = -(eps / B'(k)) int_flat^k B'(t) exp(-int_t^k H) h(t, eps) dt.

Near ``sharp`` the coefficient ``B''/B' = (alpha + 1)/(sharp - k)`` is
singular; the integration is switched to an integrated-by-parts
representation whose leading term is ``-(eps/alpha)(sharp - k) h``.

Internally the ODE is solved for the normalised defect ``g = (Gamma - eps)/eps``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Chebyshev
from scipy.integrate import quad, solve_ivp

from .errors import QuadFailure, StepFailure
from .model import FlowConstants, incoming_from_flux, polar_point
from .slope import H_of, h_limit, sg_prime, grad_k
from .coords import G_varrho
from .model import polar_grad

DEFAULT_KNOTS = 512
RTOL = 1e-12
ATOL = 1e-15
TIP_FLOOR_FRACTION = 1e-5
CHEB_DEG = 60


def h_direct(k, eps, fc: FlowConstants):
    """``h(k, eps)`` from the slope vectors on the polar (vectorised in ``k``)."""
    k = np.asarray(k, dtype=float)
    if eps < 1e-8:
        return h_limit(k, fc)
    inflow = incoming_from_flux(eps, fc)
    U = polar_point(k, inflow, fc)
    s = sg_prime(U, inflow, fc, check=False)
    gu, gv = polar_grad(U, inflow, fc)
    return s.dot((gu, gv)) / (eps * G_varrho(U, eps, fc) * s.dot(grad_k(U)))


@dataclass(frozen=True)
class SmoothCoefficients:
    """Chebyshev interpolants of ``H`` and ``h(., eps)`` on ``[flat, sharp]``."""

    H: Chebyshev
    h: Chebyshev
    E: Chebyshev  # antiderivative of H vanishing at flat

    @classmethod
    def build(cls, W, eps, fc, deg=CHEB_DEG):
        dom = [W.flat, W.sharp]
        H = Chebyshev.interpolate(lambda k: H_of(k, fc), deg, domain=dom)
        h = Chebyshev.interpolate(lambda k: h_direct(k, eps, fc), deg, domain=dom)
        return cls(H, h, H.integ(lbnd=W.flat))


def _log_B1_prime(W, k):
    _, B1, B2 = W.eval(k)
    return B2 / B1


def gamma_rhs(k, Gamma, W, eps, fc: FlowConstants, h=None):
    """Right-hand side ``(-B''/B' - H)(Gamma - eps) - eps h(k, eps)``."""
    hk = h_direct(k, eps, fc) if h is None else h
    return (-_log_B1_prime(W, k) - H_of(k, fc)) * (Gamma - eps) - eps * hk


def chebyshev_knots(flat, sharp, n=DEFAULT_KNOTS):
    """``n`` knots clustered at both ends of ``[flat, sharp)`` (``sharp`` excluded)."""
    i = np.arange(n)
    return flat + 0.5 * (sharp - flat) * (1.0 - np.cos(np.pi * i / n))


@dataclass
class GammaCurve:
    """Sampled free boundary with continuous evaluation.

    ``value``, ``deriv`` and ``deriv2`` evaluate ``Gamma``, ``Gamma'`` and
    ``Gamma''`` anywhere in ``[flat, sharp)``: the ODE's dense output up to
    ``k_switch`` and the tip representation beyond it.  ``Gamma'`` is
    obtained from the ODE itself and ``Gamma''`` by differentiating it.
    """

    eps: float
    W: object
    fc: FlowConstants
    knots: np.ndarray
    values: np.ndarray
    slopes: np.ndarray
    k_switch: float
    tip_coeff: float
    coeffs: SmoothCoefficients = field(repr=False)
    _sol: object = field(repr=False, default=None)

    # normalised defect g = (Gamma - eps)/eps
    def _g(self, k):
        k = np.asarray(k, dtype=float)
        out = np.empty_like(k)
        inner = k <= self.k_switch
        if np.any(inner):
            out[inner] = self._sol(k[inner])[0] if k.ndim else self._sol(float(k))[0]
        if np.any(~inner):
            kk = np.atleast_1d(k[~inner])
            vals = np.array([_tip_defect(self.W, self.coeffs, x, self.fc) for x in kk])
            out[~inner] = vals if k.ndim else vals[0]
        return out

    def _rhs_norm(self, k, g):
        return (-_log_B1_prime(self.W, k) - self.coeffs.H(k)) * g - self.coeffs.h(k)

    def value(self, k):
        return self.eps * (1.0 + self._g(k))

    def defect(self, k):
        """``eps - Gamma(k) >= 0``."""
        return -self.eps * self._g(k)

    def deriv(self, k):
        return self.eps * self._rhs_norm(k, self._g(k))

    def deriv2(self, k):
        k = np.asarray(k, dtype=float)
        g = self._g(k)
        g1 = self._rhs_norm(k, g)
        _, B1, B2, B3 = self.W.derivs(k, 3)
        L = B2 / B1 + self.coeffs.H(k)
        L1 = B3 / B1 - (B2 / B1) ** 2 + self.coeffs.H.deriv()(k)
        return self.eps * (-L1 * g - L * g1 - self.coeffs.h.deriv()(k))

    def lower_bound_ratio(self, k=None):
        """``|Gamma - eps| / (eps sin(pi (k - flat)/(sharp - flat)))`` at the knots."""
        k = self.knots[1:] if k is None else np.asarray(k)
        W = self.W
        s = np.sin(np.pi * (k - W.flat) / (W.sharp - W.flat))
        return np.abs(self.defect(k)) / (self.eps * s)

    def table(self):
        """Columns ``(k, Gamma, Gamma', eps - Gamma, lower-bound ratio)``."""
        k = self.knots
        ratio = np.r_[np.nan, self.lower_bound_ratio(k[1:])]
        return np.column_stack([k, self.values, self.slopes, self.eps - self.values, ratio])


def _tip_defect(W, co: SmoothCoefficients, k, fc):
    """Normalised defect ``g(k)`` from the integrated-by-parts representation.

    ``g = -(1/B'(k)) [B(k) h(k) - B(flat) e^{-E(k)} h(flat)
    - int_flat^k B(t) (H h + h_t)(t) e^{E(t) - E(k)} dt]``.
    """
    B, B1, _ = W.eval(k)
    Ek = co.E(k)
    hp = co.h.deriv()

    def integrand(t):
        return float(W.eval(t)[0]) * (co.H(t) * co.h(t) + hp(t)) * np.exp(co.E(t) - Ek)

    val, err = quad(integrand, W.flat, k, limit=400, epsabs=0.0, epsrel=1e-13)
    if not np.isfinite(val):
        raise QuadFailure("tip integral")
    B0 = float(W.eval(W.flat)[0])
    bracket = B * co.h(k) - B0 * np.exp(-Ek) * co.h(W.flat) - val
    return float(-bracket / B1)


def gamma_tip(W, eps, fc: FlowConstants, k, coeffs: SmoothCoefficients = None):
    """``Gamma(k)`` near ``sharp`` from the integrated-by-parts form."""
    co = SmoothCoefficients.build(W, eps, fc) if coeffs is None else coeffs
    k = np.atleast_1d(np.asarray(k, dtype=float))
    g = np.array([_tip_defect(W, co, x, fc) for x in k])
    out = eps * (1.0 + g)
    return out if out.size > 1 else float(out[0])


def tip_leading(W, eps, fc: FlowConstants, k):
    """Leading tip term ``-(eps/alpha)(sharp - k) h(k, eps)`` of ``Gamma - eps``."""
    return -(eps / W.alpha) * (W.sharp - np.asarray(k)) * h_direct(k, eps, fc)


def solve_gamma_ode(W, eps: float, fc: FlowConstants, grid=None,
                    rtol: float = RTOL, atol: float = ATOL) -> GammaCurve:
    """Integrate the free-boundary ODE from ``flat`` (DOP853, dense output).

    Parameters
    ----------
    grid : int or array, optional
        Number of Chebyshev-clustered knots (default 512) or explicit knots.
    """
    if grid is None or np.isscalar(grid):
        knots = chebyshev_knots(W.flat, W.sharp, DEFAULT_KNOTS if grid is None else int(grid))
    else:
        knots = np.asarray(grid, dtype=float)
    span = W.sharp - W.flat
    floor = TIP_FLOOR_FRACTION * span
    k_switch = W.sharp - min(0.5 * W.delta, 10.0 * floor)
    co = SmoothCoefficients.build(W, eps, fc)

    def rhs(k, g):
        return (-_log_B1_prime(W, k) - co.H(k)) * g - co.h(k)

    sol = solve_ivp(rhs, (W.flat, k_switch), [0.0], method="DOP853", rtol=rtol,
                    atol=atol, dense_output=True)
    if not sol.success:
        raise StepFailure(sol.message)
    curve = GammaCurve(eps, W, fc, knots, np.empty_like(knots), np.empty_like(knots),
                       k_switch, -eps / W.alpha * float(co.h(W.sharp)), co, sol.sol)
    curve.values = curve.value(knots)
    curve.slopes = curve.deriv(knots)
    return curve


def gamma_quadrature(W, eps: float, fc: FlowConstants, k) -> float:
    """Independent evaluation of ``Gamma(k)`` from the integrating-factor formula.

    Uses adaptive quadrature for both the outer integral and ``int H``,
    and evaluates ``h`` directly from the slope vectors.
    """
    k = float(k)
    if k == W.flat:
        return eps

    def Eint(a, b):
        val, _ = quad(lambda t: H_of(t, fc), a, b, epsabs=0.0, epsrel=1e-13, limit=200)
        return val

    def integrand(t):
        _, B1, _ = W.eval(t)
        return float(B1) * np.exp(-Eint(t, k)) * float(h_direct(t, eps, fc))

    val, err = quad(integrand, W.flat, k, epsabs=0.0, epsrel=1e-12, limit=200)
    if not np.isfinite(val) or err > 1e-8 * abs(val) + 1e-300:
        raise QuadFailure(f"outer integral error estimate {err:.3e}")
    _, B1k, _ = W.eval(k)
    return eps - eps * val / float(B1k)


def check_gamma_lower_bound(curve: GammaCurve) -> float:
    """Infimum over the interior knots of the lower-bound ratio."""
    return float(np.min(curve.lower_bound_ratio()))
