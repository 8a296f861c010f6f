"""Quantitative checks on a computed strip solution.

* :func:`boundary_residual` -- the free-boundary slope defect
  ``R(k) = |Gamma'(k) - F(y_u/y_v)|`` along the wall image, in both the
  ``(k, varrho)`` form and the hodograph ``(u, v)`` form;
* :func:`order_fit` -- least-squares slope of ``log sup R`` against
  ``log eps`` over a sweep;
* :func:`perturbation_check` -- weighted distance between the computed
  field and the limit-solution jets;
* :func:`weighted_norm` -- discrete version of the ``(sharp - k)``-weighted
  Hoelder norms;
* :func:`structural_signs` -- the sign conditions the construction needs.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .coords import jacobian
from .errors import InsufficientData
from .hodograph import interior_coeffs, shock_oblique_coeffs
from .limit import upsilon_grad, upsilon_hess
from .model import (FlowConstants, Velocity, incoming_from_flux, polar_grad,
                    polar_point, sound_speed_sq)
from .slope import (F_of_gradient, H_of, dF_limit, grad_k, h_of, s_prime,
                    sg_prime)

#: Fraction of the truncated k-range excluded at each end from sup-norms.
EDGE_BUFFER = 0.02
BOUNDED_FACTOR = 3.0


@dataclass
class Check:
    name: str
    passed: bool
    value: float

    def as_dict(self):
        return {"name": self.name, "pass": bool(self.passed), "value": float(self.value)}


def interior_mask(k, k_left, k_right, buffer=EDGE_BUFFER):
    """Nodes at least ``buffer * (k_right - k_left)`` away from both edges."""
    pad = buffer * (k_right - k_left)
    return (k >= k_left + pad) & (k <= k_right - pad)


# --- boundary residual --------------------------------------------------------------

@dataclass
class ResidualReport:
    """Slope defect along the wall image for one ``eps``."""

    eps: float
    sup_residual: float
    weighted_sup: float
    k: np.ndarray = field(repr=False)
    residual: np.ndarray = field(repr=False)
    residual_uv: np.ndarray = field(repr=False)
    form_gap: float = 0.0
    grid: tuple = ()
    fitted_order: float = float("nan")

    def as_dict(self):
        return {"eps": self.eps, "sup_residual": self.sup_residual,
                "weighted_sup": self.weighted_sup, "form_gap": self.form_gap,
                "grid": list(self.grid), "fit_slope": self.fitted_order}

    def profile_rows(self):
        return np.column_stack([self.k, self.residual, self.residual_uv])


def _dvarrho_dk_along(U, varrho, fc, du, dv):
    """Slope ``d varrho / d k`` of the hodograph direction ``(du, dv)``."""
    jac = jacobian(U, varrho, fc)
    return (jac.r_u * du + jac.r_v * dv) / (jac.k_u * du + jac.k_v * dv)


def boundary_residual(F, fc: FlowConstants = None, buffer: float = EDGE_BUFFER) -> ResidualReport:
    """Slope defect on the ``sigma = 0`` nodes of a solved strip.

    ``(k, varrho)`` form: ``|Gamma'(k) - F_of(y_u/y_v, (k, Gamma(k)))|``.
    ``(u, v)`` form: ``|du_b/dv - s'_1/s'_2|`` where ``du_b/dv`` is the slope
    of the wall image.  Both vanish together; the form gap compares the
    second, mapped back to ``(k, varrho)`` slopes, with the first.

    Nodes within ``buffer`` of the truncation edges, and (in capped mode)
    nodes where the wall data were modified, are excluded.
    """
    dom = F.dom
    fc = fc or dom.fc
    g = dom.geom
    k = g.k[:, 0]
    mask = interior_mask(k, dom.k_left, dom.k_right, buffer)
    if dom.edge_mode == "capped":
        mask &= k < dom.wall.k_a
    yu, yv, *_ = F.derivatives()
    U = Velocity(g.u[mask, 0], g.v[mask, 0])
    r = g.varrho[mask, 0]
    Fv = F_of_gradient(yu[mask, 0], yv[mask, 0], U, r, fc)
    R = np.abs(g.Gam1[mask, 0] - Fv)
    # hodograph form: tangent of the wall image is (u_s, v_s)
    us, vs = g.J[0, 0][mask, 0], g.J[1, 0][mask, 0]
    sp_ = s_prime(U, yu[mask, 0], yv[mask, 0], fc)
    R_uv = np.abs(us / vs - sp_.a / sp_.b)
    back = np.abs(_dvarrho_dk_along(U, r, fc, us, vs) - _dvarrho_dk_along(U, r, fc, sp_.a, sp_.b))
    gap = float(np.max(np.abs(back - R)) / max(np.max(R), 1e-300))
    weight = (dom.W.sharp - k[mask]) ** dom.W.alpha
    return ResidualReport(dom.eps, float(R.max()), float((R * weight).max()), k[mask], R,
                          R_uv, gap, (dom.nk, dom.ns))


def order_fit(reports) -> float:
    """Least-squares slope of ``log sup R`` against ``log eps``.

    Raises
    ------
    InsufficientData
        With fewer than three distinct ``eps`` values.
    """
    eps = np.array([r.eps for r in reports], dtype=float)
    sup = np.array([r.sup_residual for r in reports], dtype=float)
    if np.unique(eps).size < 3:
        raise InsufficientData("order fit needs at least three eps values")
    if np.any(sup <= 0):
        raise InsufficientData("non-positive residual in sweep")
    slope = float(np.polyfit(np.log(eps), np.log(sup), 1)[0])
    for r in reports:
        r.fitted_order = slope
    return slope


# --- perturbation estimates ----------------------------------------------------

@dataclass
class PerturbationReport:
    """Weighted deviations of the computed field from the limit jets."""

    eps: float
    ratio0: float
    ratio1: float
    ratio2: dict

    def as_dict(self):
        return {"eps": self.eps, "ratio0": self.ratio0, "ratio1": self.ratio1,
                "ratio2": {str(b): v for b, v in self.ratio2.items()}}


def perturbation_check(F, betas=(0.25, 0.5, 0.75), buffer: float = EDGE_BUFFER) -> PerturbationReport:
    """``sup |grad^i y - grad^i Upsilon| (sharp - k)^(alpha + i) / eps`` (i = 0, 1)
    and ``sup |grad^2 y - grad^2 Upsilon| (sharp - k)^(alpha + 2) / eps^beta``.

    The limit jets are taken at the same ``k`` (the field is compared along
    rays through the origin).  Gradients are Euclidean norms of the
    difference vectors in the hodograph plane.
    """
    dom = F.dom
    W, eps = dom.W, dom.eps
    g = dom.geom
    mask = interior_mask(g.k, dom.k_left, dom.k_right, buffer)
    if dom.edge_mode == "capped":
        mask &= g.k < dom.wall.k_a
    k = g.k[mask]
    y = F.y[mask]
    yu, yv, yuu, yuv, yvv = (d[mask] for d in F.derivatives())
    B = W.derivs(k, 0)[0]
    Gu, Gv = upsilon_grad(k, W, dom.fc)
    Guu, Guv, Gvv = upsilon_hess(k, W, dom.fc)
    wgt = W.sharp - k
    a = W.alpha
    d0 = np.abs(y - B)
    d1 = np.hypot(yu - Gu, yv - Gv)
    d2 = np.sqrt((yuu - Guu) ** 2 + 2 * (yuv - Guv) ** 2 + (yvv - Gvv) ** 2)
    r0 = float(np.max(d0 * wgt ** a) / eps)
    r1 = float(np.max(d1 * wgt ** (a + 1)) / eps)
    s2 = float(np.max(d2 * wgt ** (a + 2)))
    return PerturbationReport(eps, r0, r1, {b: s2 / eps ** b for b in betas})


def bounded_across(values, factor: float = BOUNDED_FACTOR) -> bool:
    """Sweep values (ordered by decreasing eps) never exceed ``factor`` times the first."""
    v = np.asarray(values, dtype=float)
    return bool(np.all(np.isfinite(v)) and np.all(v <= factor * v[0]))


def stable_within(values, factor: float = BOUNDED_FACTOR) -> bool:
    """``max / min <= factor`` for positive values."""
    v = np.asarray(values, dtype=float)
    return bool(np.all(v > 0) and v.max() / v.min() <= factor)


# --- weighted norms --------------------------------------------------------------

@dataclass
class WeightedNorm:
    """Discrete ``C^{(-m)}_{p, beta}`` norm with weight ``(sharp - k)``."""

    m: float
    p: int
    beta: float
    value: float
    sup_part: float
    holder_part: float


def _holder_sup(points, kw, fp, m, p, beta, sharp, max_points, chunk=512):
    n = len(kw)
    if n > max_points:
        idx = np.unique(np.linspace(0, n - 1, max_points).round().astype(int))
        points, kw, fp = points[idx], kw[idx], fp[idx]
        n = len(kw)
    best = 0.0
    for start in range(0, n, chunk):
        sl = slice(start, min(start + chunk, n))
        dist = np.linalg.norm(points[sl, None, :] - points[None, :, :], axis=-1)
        diff = np.abs(fp[sl, None] - fp[None, :])
        kmax = np.maximum(kw[sl, None], kw[None, :])  # k_2 is the one nearer sharp
        with np.errstate(divide="ignore", invalid="ignore"):
            q = (sharp - kmax) ** (m + p + beta) * diff / dist ** beta
        q[~np.isfinite(q) | (dist == 0)] = 0.0
        best = max(best, float(q.max()))
    return best


def weighted_norm(k, derivs, m: float, p: int, beta: float, sharp: float,
                  points=None, max_points: int = 4000) -> WeightedNorm:
    """Weighted norm from samples.

    Parameters
    ----------
    k : array
        Abscissae used in the weight ``(sharp - k)``.
    derivs : sequence
        ``[f, f', ..., f^(p)]`` sampled at the same points (each entry may
        be an array of norms of the ``i``-th derivative tensor).
    points : array, optional
        Coordinates for the Hoelder quotient distance (default: ``k``);
        shape ``(n,)`` or ``(n, d)``.
    max_points : int
        Cap on the number of samples used for the pair quotient; sample
        sets are thinned deterministically above the cap.
    """
    k = np.asarray(k, dtype=float).ravel()
    if len(derivs) < p + 1:
        raise ValueError("need derivatives up to order p")
    w = sharp - k
    sup = max(float(np.max(np.abs(np.asarray(derivs[i]).ravel()) * w ** (m + i)))
              for i in range(p + 1))
    pts = k[:, None] if points is None else np.asarray(points, dtype=float).reshape(len(k), -1)
    hol = _holder_sup(pts, k, np.asarray(derivs[p], dtype=float).ravel(), m, p, beta, sharp,
                      max_points)
    return WeightedNorm(m, p, beta, sup + hol, sup, hol)


# --- structural signs -----------------------------------------------------------

@dataclass
class SignReport:
    eps: float
    checks: list

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def as_dict(self):
        return {"eps": self.eps, "checks": [c.as_dict() for c in self.checks]}


def sg_dot_gradG(k, eps, fc: FlowConstants):
    """``s_g' . grad G`` on the polar of flux ``eps`` at slopes ``k``."""
    inflow = incoming_from_flux(eps, fc)
    U = polar_point(np.asarray(k, dtype=float), inflow, fc)
    return sg_prime(U, inflow, fc, check=False).dot(polar_grad(U, inflow, fc))


def structural_signs(W, eps: float, fc: FlowConstants, dom=None, n: int = 400,
                     zero_tol: float = 1e-12) -> SignReport:
    """Evaluate the sign conditions on ``[flat, sharp)``.

    * ``s_g' . grad G > 0`` on ``varrho = eps`` (``= 0`` when ``eps = 0``);
    * subsonic ``q < c`` on the nodes of ``dom`` (or on the polar arcs
      ``varrho = 0`` and ``eps`` when no domain is given);
    * ellipticity of the transformed operator on ``dom`` when given;
    * ``H > 0``, ``h > 0`` and ``dF_limit < 0`` on the limit arc.
    """
    k = W.flat + (W.sharp - W.flat) * (np.arange(n) + 0.5) / n
    checks = []
    sgG = sg_dot_gradG(k, eps, fc)
    if eps > 0:
        checks.append(Check("sg_dot_gradG_positive", bool(np.all(sgG > 0)), float(np.min(sgG))))
    else:
        scale = fc.q_bar ** 6
        checks.append(Check("sg_dot_gradG_zero_at_limit",
                            bool(np.max(np.abs(sgG)) <= zero_tol * scale),
                            float(np.max(np.abs(sgG)))))
    if dom is not None:
        uu, vv = dom.geom.u, dom.geom.v
    else:
        pts = [polar_point(k, incoming_from_flux(e, fc), fc) for e in {0.0, eps}]
        uu = np.concatenate([p.u for p in pts])
        vv = np.concatenate([p.v for p in pts])
    U = Velocity(uu, vv)
    mach = np.sqrt((uu ** 2 + vv ** 2) / sound_speed_sq(U, fc))
    checks.append(Check("subsonic", bool(np.all(mach < 1)), float(1 - mach.max())))
    if dom is not None:
        from .bvp import transformed_coeffs
        tc = transformed_coeffs(dom.geom, fc)
        disc = tc.discriminant
        checks.append(Check("elliptic_transformed", bool(np.all(disc < 0)), float(disc.max())))
        disc_uv = interior_coeffs(U, fc).discriminant
        checks.append(Check("elliptic_hodograph", bool(np.all(disc_uv < 0)), float(disc_uv.max())))
    H = H_of(k, fc)
    checks.append(Check("H_positive", bool(np.all(H > 0)), float(H.min())))
    h = np.array([h_of(kk, eps, fc) for kk in k])
    checks.append(Check("h_positive", bool(np.all(h > 0)), float(h.min())))
    dF = dF_limit(k, W, fc)
    checks.append(Check("dF_limit_negative", bool(np.all(dF < 0)), float(dF.max())))
    return SignReport(eps, checks)


def report_dict(obj):
    """JSON-friendly dict of a dataclass report."""
    if hasattr(obj, "as_dict"):
        return obj.as_dict()
    return asdict(obj)
