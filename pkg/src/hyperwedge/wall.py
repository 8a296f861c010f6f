"""Wall data ``B(k)``: the stream coordinate ``y`` on the wall as a function
of the slope ``k = u/v``.

``B`` maps ``[flat, sharp)`` increasingly and convexly onto ``[0, inf)`` and
coincides with the power tail ``(sharp - k)^(-alpha)`` on
``(sharp - delta, sharp)``.

The blended profile is

    B(k) = T(k) - T(flat) * (1 - S((k - flat) / (sharp - delta - flat))),

with ``T`` the power tail and ``S`` the septic smoothstep
``35t^4 - 84t^5 + 70t^6 - 20t^7`` (``S' = 140 t^3 (1-t)^3``).  It satisfies
``B(flat) = 0``, ``B'(flat) = T'(flat) > 0`` and agrees with ``T`` to third
order at ``sharp - delta``; convexity is verified on construction.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial

from .errors import BlendNotConvex

SMOOTHSTEP7 = Polynomial([0, 0, 0, 0, 35, -84, 70, -20])
N_VALIDATE = 10_000


def power_tail(k, sharp, alpha, order=3):
    """``(sharp - k)^(-alpha)`` and its first ``order`` derivatives."""
    x = sharp - np.asarray(k, dtype=float)
    out = []
    coef = 1.0
    for j in range(order + 1):
        out.append(coef * x ** (-alpha - j))
        coef *= alpha + j
    return tuple(out)


@dataclass(frozen=True)
class WallProfile:
    """Wall data on ``[flat, sharp)``.

    ``kind`` is ``"blended"`` (exact power tail near ``sharp``) or
    ``"pure_tail"`` (``T(k) - T(flat)`` everywhere, which differs from the
    exact tail by a constant).
    """

    flat: float
    sharp: float
    alpha: float
    delta: float
    kind: str = "blended"
    _smooth: tuple = field(default=(), repr=False, compare=False)

    @property
    def blend_end(self) -> float:
        return self.sharp - self.delta

    def derivs(self, k, order=3):
        """``(B, B', ..., B^(order))`` at ``k`` (``order <= 3``)."""
        k = np.asarray(k, dtype=float)
        T = power_tail(k, self.sharp, self.alpha, order)
        T0 = float(power_tail(self.flat, self.sharp, self.alpha, 0)[0])
        if self.kind == "pure_tail":
            return (T[0] - T0,) + T[1:]
        L = self.blend_end - self.flat
        t = np.clip((k - self.flat) / L, 0.0, 1.0)
        out = [T[0] - T0 * (1.0 - SMOOTHSTEP7(t))]
        p = SMOOTHSTEP7
        for j in range(1, order + 1):
            p = p.deriv()
            out.append(T[j] + T0 * p(t) / L ** j)
        return tuple(out)

    def eval(self, k):
        """``(B, B', B'')`` at ``k``."""
        return self.derivs(k, order=2)

    def __call__(self, k):
        return self.derivs(k, order=0)[0]


@dataclass
class ValidationReport:
    passed: bool
    failures: list
    min_B1: float
    min_B2: float
    tail_rel_err: float
    B_flat: float

    def __str__(self):
        head = "PASS" if self.passed else "FAIL"
        lines = [f"wall profile validation: {head}",
                 f"  min B' = {self.min_B1:.6g}, min B'' = {self.min_B2:.6g}",
                 f"  B(flat) = {self.B_flat:.3g}, tail rel. err = {self.tail_rel_err:.3g}"]
        lines += [f"  - {f}" for f in self.failures]
        return "\n".join(lines)


def _check_params(flat, sharp, alpha, delta):
    if not (0.0 < flat < sharp < np.sqrt(0.5)):
        raise ValueError("need 0 < flat < sharp < sqrt(1/2)")
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    if not (0.0 < delta < sharp - flat):
        raise ValueError("delta must lie in (0, sharp - flat)")


def validate(W, n: int = N_VALIDATE, tail_tol: float = 1e-12) -> ValidationReport:
    """Sample ``B`` on ``[flat, sharp)`` and check the structural assumptions.

    Accepts any object with ``flat``, ``sharp``, ``alpha``, ``delta`` and an
    ``eval`` method.  Failures are reported, not raised.
    """
    failures = []
    # sample up to a small distance from the singular end
    k = np.linspace(W.flat, W.sharp - 1e-3 * (W.sharp - W.flat), n)
    B, B1, B2 = W.eval(k)
    B_flat = float(W.eval(np.array([W.flat]))[0][0])
    if abs(B_flat) > 1e-12:
        failures.append(f"B(flat) = {B_flat:.3e} != 0")
    bad = np.flatnonzero(B1 <= 0)
    if bad.size:
        failures.append(f"B' <= 0 at k = {k[bad[0]]:.6f}")
    bad = np.flatnonzero(B2 <= 0)
    if bad.size:
        failures.append(f"B'' <= 0 at k = {k[bad[0]]:.6f}")
    tail = k > W.sharp - W.delta
    err = 0.0
    if np.any(tail):
        T = power_tail(k[tail], W.sharp, W.alpha, 0)[0]
        err = float(np.max(np.abs(B[tail] - T) / T))
        if err > tail_tol:
            failures.append(f"tail mismatch {err:.3e} (B != (sharp-k)^-alpha)")
    return ValidationReport(not failures, failures, float(B1.min()), float(B2.min()),
                            err, B_flat)


def make_blended_profile(flat: float, sharp: float, alpha: float,
                         delta: float) -> WallProfile:
    """Convex ``C^3`` profile with the exact power tail on ``(sharp-delta, sharp)``.

    Raises
    ------
    BlendNotConvex
        If the sampled ``B'`` or ``B''`` is not positive.
    """
    _check_params(flat, sharp, alpha, delta)
    W = WallProfile(float(flat), float(sharp), float(alpha), float(delta))
    rep = validate(W)
    if rep.min_B1 <= 0 or rep.min_B2 <= 0:
        raise BlendNotConvex("; ".join(rep.failures))
    return W


def make_pure_tail_profile(flat: float, sharp: float, alpha: float,
                           delta: float = None) -> WallProfile:
    """``B = (sharp-k)^(-alpha) - (sharp-flat)^(-alpha)``.

    Convenient for tests: only ``B'`` and ``B''`` enter the free-boundary
    ODE, and these are exact power laws.  Violates the exact-tail assumption
    by a constant shift.
    """
    if delta is None:
        delta = 0.5 * (sharp - flat)
    _check_params(flat, sharp, alpha, delta)
    return WallProfile(float(flat), float(sharp), float(alpha), float(delta), "pure_tail")


def sample_profile(W: WallProfile, n: int = 200):
    """Sampled ``(k, B, B', B'')`` array for CSV export."""
    k = np.linspace(W.flat, W.sharp - 0.01 * (W.sharp - W.flat), n)
    return np.column_stack((k,) + tuple(W.eval(k)))
