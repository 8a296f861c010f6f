"""Elliptic mixed boundary-value problem on the narrow strip.

The strip between the approximate wall image ``varrho = Gamma(k)`` and the
shock ``varrho = eps`` is mapped to a rectangle by

    varrho(k, sigma) = Gamma(k) + sigma (eps - Gamma(k)),   0 <= sigma <= 1,

and ``k`` itself is replaced by a uniform computational coordinate ``s``
through a logarithmic stretching ``k = kappa(s)`` that clusters nodes toward
``sharp`` where the wall data blow up.  The hodograph equation is rewritten
in ``(s, sigma)`` by the chain rule (exact metric terms from the implicit
derivatives of the polar) and discretised with the standard second-order
nine-point stencil.

Boundary conditions:

* ``sigma = 0`` (wall): ``y = B(k)``;
* ``sigma = 1`` (shock): ``I y_u + J y_v = 0``, one-sided second-order
  differences in ``sigma``;
* truncation edges ``k = k_left, k_right``: Dirichlet data (see ``edge_mode``).

The unknown is split as ``y = Y0 + Z`` where the lift
``Y0 = B(k) + sigma (eps - Gamma) B'(k) phi(k)`` carries the wall data and
the leading flux derivative of the limit solution analytically
(``phi = d_varrho Upsilon / B'``).  Only the small correction ``Z`` is
discretised, which keeps discretisation error well below the boundary
residual being measured.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from numpy.polynomial import Chebyshev
from scipy.interpolate import RectBivariateSpline
from scipy.sparse.linalg import splu

from .coords import ray_derivatives
from .errors import DegenerateWidth, OutOfDomain, SolverBreakdown
from .hodograph import interior_coeffs, shock_oblique_coeffs
from .model import FlowConstants, Velocity, incoming_from_flux, sound_speed_sq

DEFAULT_GRID = (256, 32)
MIN_GRID = (16, 8)
STRETCH_OFFSET = 0.05  # fraction of (sharp - flat) added to (sharp - k) in the log map


# --- wall data with a cap near sharp -----------------------------------------

def _smoothstep5(t):
    """Quintic smoothstep and its first three derivatives (flat outside [0, 1])."""
    inside = (t > 0.0) & (t < 1.0)
    t = np.clip(t, 0.0, 1.0)
    S = t ** 3 * (10 - 15 * t + 6 * t * t)
    d = [30 * t * t * (1 - t) ** 2, 60 * t * (1 - t) * (1 - 2 * t), 60 * (1 - 6 * t + 6 * t * t)]
    return (S,) + tuple(np.where(inside, x, 0.0) for x in d)


@dataclass(frozen=True)
class CappedProfile:
    """``B_n``: equal to ``B`` up to ``k_a``, constant ``B(k_b)`` beyond ``k_b``.

    A quintic smoothstep blends the two on ``[k_a, k_b]``.  The result is
    monotone whenever ``B`` is.
    """

    base: object
    k_a: float
    k_b: float

    def __getattr__(self, name):
        return getattr(self.base, name)

    def derivs(self, k, order=3):
        k = np.asarray(k, dtype=float)
        kk = np.minimum(k, self.k_b)
        Bd = self.base.derivs(kk, order)
        cap = float(self.base.derivs(self.k_b, 0)[0])
        L = self.k_b - self.k_a
        t = (k - self.k_a) / L
        S = _smoothstep5(t)
        w = 1.0 - S[0]  # weight of B
        dw = [-S[1] / L, -S[2] / L ** 2, -S[3] / L ** 3]
        f = [Bd[0] - cap] + list(Bd[1:])
        out = [cap + w * f[0]]
        # Leibniz rule for (w f)^(j)
        binom = {1: (1, 1), 2: (1, 2, 1), 3: (1, 3, 3, 1)}
        wl = [w] + dw
        for j in range(1, order + 1):
            out.append(sum(binom[j][m] * wl[m] * f[j - m] for m in range(j + 1)))
        return tuple(out)

    def eval(self, k):
        return self.derivs(k, 2)


# --- geometry ---------------------------------------------------------------

@dataclass(frozen=True)
class StretchMap:
    """``k = sharp + c - (x_l + c)^(1 - s) (x_r + c)^s`` with ``x = sharp - k``."""

    sharp: float
    k_left: float
    k_right: float
    c: float

    def __call__(self, s):
        a = np.log(self.sharp - self.k_left + self.c)
        b = np.log(self.sharp - self.k_right + self.c)
        e = np.exp(a + (b - a) * s)
        lam = b - a
        return self.sharp + self.c - e, -lam * e, -lam * lam * e

    def inverse(self, k):
        a = np.log(self.sharp - self.k_left + self.c)
        b = np.log(self.sharp - self.k_right + self.c)
        return (np.log(self.sharp + self.c - np.asarray(k)) - a) / (b - a)


@dataclass
class StripDomain:
    """Rectangle ``(s, sigma) in [0,1]^2`` and the data needed for assembly.

    ``wall`` is the profile used for Dirichlet data (``W`` itself in
    ``"truncation"`` mode, a :class:`CappedProfile` in ``"capped"`` mode);
    ``W`` is the profile that generated ``gamma``.
    """

    W: object
    eps: float
    gamma: object
    fc: FlowConstants
    k_left: float
    k_right: float
    nk: int
    ns: int
    edge_mode: str = "truncation"
    wall: object = None
    stretch: StretchMap = None
    lift: bool = True
    geom: "Geometry" = field(default=None, repr=False)

    @property
    def s(self):
        return np.linspace(0.0, 1.0, self.nk + 1)

    @property
    def sigma(self):
        return np.linspace(0.0, 1.0, self.ns + 1)

    @property
    def hs(self):
        return 1.0 / self.nk

    @property
    def hsig(self):
        return 1.0 / self.ns

    @property
    def shape(self):
        return self.nk + 1, self.ns + 1


@dataclass
class Geometry:
    """Per-node geometric data on the ``(nk+1, ns+1)`` grid.

    ``Ji[a, i]`` is ``d xi_a / d x_i`` with ``xi = (s, sigma)`` and
    ``x = (u, v)``; ``Xi2[a, i, j]`` is ``d^2 xi_a / d x_i d x_j``.
    """

    k: np.ndarray
    kp: np.ndarray
    kpp: np.ndarray
    sigma: np.ndarray
    varrho: np.ndarray
    u: np.ndarray
    v: np.ndarray
    J: np.ndarray
    Ji: np.ndarray
    Xi2: np.ndarray
    Gam: np.ndarray
    Gam1: np.ndarray
    Gam2: np.ndarray


def compute_geometry(dom: StripDomain) -> Geometry:
    """Evaluate the map ``(s, sigma) -> (u, v)`` and its first/second derivatives."""
    s, sig = dom.s, dom.sigma
    k1, kp1, kpp1 = dom.stretch(s)
    G0 = dom.gamma.value(k1)
    G1 = dom.gamma.deriv(k1)
    G2 = dom.gamma.deriv2(k1)
    K, S = np.meshgrid(k1, sig, indexing="ij")
    kp = np.broadcast_to(kp1[:, None], K.shape)
    kpp = np.broadcast_to(kpp1[:, None], K.shape)
    g0, g1, g2 = (np.broadcast_to(a[:, None], K.shape) for a in (G0, G1, G2))
    w = dom.eps - g0
    r = g0 + S * w
    r_k, r_s, r_kk, r_ks = (1 - S) * g1, w, (1 - S) * g2, -g1
    rd = ray_derivatives(K, r, dom.fc)
    V = rd.v
    Vk = rd.v_k + rd.v_r * r_k
    Vs = rd.v_r * r_s
    Vkk = rd.v_kk + 2 * rd.v_kr * r_k + rd.v_rr * r_k ** 2 + rd.v_r * r_kk
    Vks = rd.v_kr * r_s + rd.v_rr * r_k * r_s + rd.v_r * r_ks
    Vss = rd.v_rr * r_s ** 2
    Uk, Us = V + K * Vk, K * Vs
    Ukk, Uks, Uss = 2 * Vk + K * Vkk, Vs + K * Vks, K * Vss
    # derivatives with respect to the computational coordinate s: d/ds = kp d/dk
    J = np.empty((2, 2) + K.shape)
    J[0, 0], J[0, 1] = Uk * kp, Us
    J[1, 0], J[1, 1] = Vk * kp, Vs
    H = np.empty((2, 2, 2) + K.shape)
    H[0, 0, 0] = Ukk * kp ** 2 + Uk * kpp
    H[0, 0, 1] = H[0, 1, 0] = Uks * kp
    H[0, 1, 1] = Uss
    H[1, 0, 0] = Vkk * kp ** 2 + Vk * kpp
    H[1, 0, 1] = H[1, 1, 0] = Vks * kp
    H[1, 1, 1] = Vss
    det = J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0]
    Ji = np.empty_like(J)
    Ji[0, 0], Ji[0, 1] = J[1, 1] / det, -J[0, 1] / det
    Ji[1, 0], Ji[1, 1] = -J[1, 0] / det, J[0, 0] / det
    Xi2 = -np.einsum("am...,mcd...,ci...,dj...->aij...", Ji, H, Ji, Ji)
    return Geometry(K, kp, kpp, S, r, K * V, V, J, Ji, Xi2, g0, g1, g2)


def build_domain(W, eps: float, gamma, fc: FlowConstants, eta_l: float, eta_r: float,
                 grid=DEFAULT_GRID, edge_mode: str = "truncation", lift: bool = True,
                 min_width: float = 1e-14) -> StripDomain:
    """Truncated strip ``[flat + eta_l, sharp - eta_r]`` with an ``nk x ns`` grid.

    ``eta_l``/``eta_r`` are absolute distances in ``k``.

    Raises
    ------
    DegenerateWidth
        If ``eps - Gamma`` is not positive at the truncation edges.
    """
    nk, ns = (int(g) for g in grid)
    if nk < MIN_GRID[0] or ns < MIN_GRID[1]:
        raise ValueError(f"grid must be at least {MIN_GRID[0]}x{MIN_GRID[1]}")
    if edge_mode not in ("truncation", "capped"):
        raise ValueError(f"unknown edge mode {edge_mode!r}")
    k_left, k_right = W.flat + eta_l, W.sharp - eta_r
    if not (W.flat < k_left < k_right < W.sharp):
        raise DegenerateWidth("truncation leaves an empty k-range")
    widths = gamma.defect(np.array([k_left, k_right]))
    if np.any(widths <= min_width * max(eps, 1e-300)) or not np.all(np.isfinite(widths)):
        raise DegenerateWidth(f"strip width at truncation edges {widths} not positive")
    wall = W
    if edge_mode == "capped":
        wall = CappedProfile(W, W.sharp - 4.0 * eta_r, W.sharp - 2.0 * eta_r)
        k_right = W.sharp - eta_r
    stretch = StretchMap(W.sharp, k_left, k_right, STRETCH_OFFSET * (W.sharp - W.flat))
    dom = StripDomain(W, eps, gamma, fc, k_left, k_right, nk, ns, edge_mode, wall,
                      stretch, lift)
    dom.geom = compute_geometry(dom)
    if np.any(dom.geom.u ** 2 + dom.geom.v ** 2 >= sound_speed_sq(Velocity(dom.geom.u, dom.geom.v), fc)):
        raise DegenerateWidth("strip image is not subsonic")
    return dom


# --- transformed operator ------------------------------------------------------

@dataclass
class TransformedCoeffs:
    """``A_ss Y_ss + 2 A_sg Y_sg + A_gg Y_gg + D_s Y_s + D_g Y_g`` (g = sigma)."""

    A_ss: np.ndarray
    A_sg: np.ndarray
    A_gg: np.ndarray
    D_s: np.ndarray
    D_g: np.ndarray

    @property
    def discriminant(self):
        return self.A_sg ** 2 - self.A_ss * self.A_gg


def transformed_coeffs(geom: Geometry, fc: FlowConstants) -> TransformedCoeffs:
    pc = interior_coeffs(Velocity(geom.u, geom.v), fc)
    a = np.array([[pc.a_uu, 0.5 * pc.a_uv], [0.5 * pc.a_uv, pc.a_vv]])
    b = np.array([pc.b_u, pc.b_v])
    Ji = geom.Ji
    A = np.einsum("ij...,ai...,bj...->ab...", a, Ji, Ji)
    D = np.einsum("ij...,aij...->a...", a, geom.Xi2) + np.einsum("i...,ai...->a...", b, Ji)
    return TransformedCoeffs(A[0, 0], A[0, 1], A[1, 1], D[0], D[1])


def oblique_st(geom: Geometry, j: int, eps: float, fc: FlowConstants):
    """Coefficients ``(a, b)`` of ``a Y_s + b Y_sigma`` on the row ``sigma_j``."""
    U = Velocity(geom.u[:, j], geom.v[:, j])
    ob = shock_oblique_coeffs(U, incoming_from_flux(eps, fc), fc, check=False)
    Ji = geom.Ji[:, :, :, j]
    return ob.I * Ji[0, 0] + ob.J * Ji[0, 1], ob.I * Ji[1, 0] + ob.J * Ji[1, 1]


# --- lift -----------------------------------------------------------------------

def phi_function(fc: FlowConstants, flat: float, sharp: float, deg: int = 40) -> Chebyshev:
    """``phi(k) = d_varrho Upsilon / B'`` on the limit circle (independent of ``B``).

    ``-2 (2q + u) / (q^3 u) (3uv/(q-u)^2 + v (q-6u)/((q-2u)(q-u)))``.
    """
    q = fc.q_bar

    def f(k):
        s = 1.0 + k * k
        u, v = q * k * k / s, q * k / s
        inner = 3 * u * v / (q - u) ** 2 + v * (q - 6 * u) / ((q - 2 * u) * (q - u))
        return -2 * (2 * q + u) / (q ** 3 * u) * inner

    return Chebyshev.interpolate(f, deg, domain=[flat, sharp])


@dataclass
class Lift:
    """Analytic lift ``Y0`` and its ``(s, sigma)`` derivatives on the grid."""

    Y: np.ndarray
    Ys: np.ndarray
    Yg: np.ndarray
    Yss: np.ndarray
    Ysg: np.ndarray
    Ygg: np.ndarray


def compute_lift(dom: StripDomain, enabled: bool = True) -> Lift:
    g = dom.geom
    shape = g.k.shape
    if not enabled:
        z = np.zeros(shape)
        return Lift(z, z, z, z, z, z)
    k = g.k[:, 0]
    B, B1, B2, B3 = dom.wall.derivs(k, 3)
    phi = phi_function(dom.fc, dom.W.flat, dom.W.sharp)
    p0, p1, p2 = phi(k), phi.deriv(1)(k), phi.deriv(2)(k)
    P0 = B1 * p0
    P1 = B2 * p0 + B1 * p1
    P2 = B3 * p0 + 2 * B2 * p1 + B1 * p2
    w0 = dom.eps - g.Gam[:, 0]
    w1, w2 = -g.Gam1[:, 0], -g.Gam2[:, 0]
    Q0 = w0 * P0
    Q1 = w1 * P0 + w0 * P1
    Q2 = w2 * P0 + 2 * w1 * P1 + w0 * P2
    S = g.sigma
    Y = B[:, None] + S * Q0[:, None]
    Yk = B1[:, None] + S * Q1[:, None]
    Ykk = B2[:, None] + S * Q2[:, None]
    Yg = np.broadcast_to(Q0[:, None], shape).copy()
    Ykg = np.broadcast_to(Q1[:, None], shape).copy()
    kp, kpp = g.kp, g.kpp
    return Lift(Y, Yk * kp, Yg, Ykk * kp ** 2 + Yk * kpp, Ykg * kp, np.zeros(shape))


# --- assembly -------------------------------------------------------------------

@dataclass
class LinearSystem:
    """Sparse system for the correction ``Z`` (node index ``i * (ns+1) + j``)."""

    matrix: sp.csc_matrix
    rhs: np.ndarray
    dom: StripDomain
    lift: Lift
    coeffs: TransformedCoeffs
    oblique: tuple


def assemble(dom: StripDomain, fc: FlowConstants = None, forcing=None,
             dirichlet=None, oblique_rhs=None) -> LinearSystem:
    """Assemble the nine-point system.

    By default the physical problem is assembled (lift enabled according to
    ``dom.lift``).  For verification the interior forcing ``L y = forcing``
    (an array on the grid, in ``(u, v)`` form), Dirichlet values and the
    oblique right-hand side (``I y_u + J y_v = oblique_rhs`` along
    ``sigma = 1``) can be overridden; in that case no lift is used unless
    ``dom.lift`` is true.
    """
    fc = dom.fc if fc is None else fc
    g = dom.geom
    nk1, ns1 = dom.shape
    hs, hg = dom.hs, dom.hsig
    tc = transformed_coeffs(g, fc)
    lift = compute_lift(dom, dom.lift)
    idx = np.arange(nk1 * ns1).reshape(nk1, ns1)
    rows, cols, vals = [], [], []
    rhs = np.zeros(nk1 * ns1)

    def add(r, c, v):
        rows.append(r.ravel())
        cols.append(c.ravel())
        vals.append(np.broadcast_to(v, r.shape).ravel())

    # interior
    I = slice(1, nk1 - 1)
    Jn = slice(1, ns1 - 1)
    Ass, Asg, Agg, Ds, Dg = (x[I, Jn] for x in (tc.A_ss, tc.A_sg, tc.A_gg, tc.D_s, tc.D_g))
    scale = 1.0 / (2 * Ass / hs ** 2 + 2 * Agg / hg ** 2)
    c = idx[I, Jn]
    cE, cW = idx[2:, Jn], idx[:-2, Jn]
    cN, cS = idx[I, 2:], idx[I, :-2]
    cNE, cNW, cSE, cSW = idx[2:, 2:], idx[:-2, 2:], idx[2:, :-2], idx[:-2, :-2]
    add(c, c, -scale * (2 * Ass / hs ** 2 + 2 * Agg / hg ** 2))
    add(c, cE, scale * (Ass / hs ** 2 + Ds / (2 * hs)))
    add(c, cW, scale * (Ass / hs ** 2 - Ds / (2 * hs)))
    add(c, cN, scale * (Agg / hg ** 2 + Dg / (2 * hg)))
    add(c, cS, scale * (Agg / hg ** 2 - Dg / (2 * hg)))
    cross = scale * 2 * Asg / (4 * hs * hg)
    add(c, cNE, cross)
    add(c, cSW, cross)
    add(c, cNW, -cross)
    add(c, cSE, -cross)
    L0 = (tc.A_ss * lift.Yss + 2 * tc.A_sg * lift.Ysg + tc.A_gg * lift.Ygg
          + tc.D_s * lift.Ys + tc.D_g * lift.Yg)[I, Jn]
    f_int = -L0 if forcing is None else np.asarray(forcing)[I, Jn] - L0
    rhs[c.ravel()] = (scale * f_int).ravel()

    # Dirichlet: wall row and truncation edges
    if dirichlet is None:
        B = dom.wall.derivs(g.k[:, 0], 0)[0]
        kval = np.broadcast_to(B[:, None], g.k.shape).copy()
        kval[0, :] = B[0]
        kval[-1, :] = B[-1]
        dvals = kval
    else:
        dvals = np.asarray(dirichlet)
    mask = np.zeros((nk1, ns1), bool)
    mask[:, 0] = mask[0, :] = mask[-1, :] = True
    dn = idx[mask]
    add(dn, dn, np.ones(dn.size))
    rhs[dn] = (dvals - lift.Y)[mask]

    # oblique rows on sigma = 1 (interior k)
    a, b = oblique_st(g, ns1 - 1, dom.eps, fc)
    a, b = a[I], b[I]
    oscale = 2 * hg / (3 * np.abs(b))
    cT = idx[I, ns1 - 1]
    add(cT, cT, oscale * 3 * b / (2 * hg))
    add(cT, idx[I, ns1 - 2], -oscale * 4 * b / (2 * hg))
    add(cT, idx[I, ns1 - 3], oscale * b / (2 * hg))
    add(cT, idx[2:, ns1 - 1], oscale * a / (2 * hs))
    add(cT, idx[:-2, ns1 - 1], -oscale * a / (2 * hs))
    j = ns1 - 1
    lift_ob = a * lift.Ys[I, j] + b * lift.Yg[I, j]
    ob_target = 0.0 if oblique_rhs is None else np.asarray(oblique_rhs)[I]
    rhs[cT] = oscale * (ob_target - lift_ob)

    A = sp.csc_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                      shape=(nk1 * ns1, nk1 * ns1))
    return LinearSystem(A, rhs, dom, lift, tc, (a, b))


# --- solve and derivatives ------------------------------------------------------

@dataclass
class FieldGrid:
    """Discrete solution ``y = Y0 + Z`` on the strip with derivative evaluation."""

    dom: StripDomain
    Z: np.ndarray
    lift: Lift
    residual_norm: float
    _d: dict = field(default_factory=dict, repr=False)

    @property
    def y(self):
        return self.lift.Y + self.Z

    @property
    def k(self):
        return self.dom.geom.k

    @property
    def sigma(self):
        return self.dom.geom.sigma

    def comp_derivatives(self):
        """``(Y_s, Y_g, Y_ss, Y_sg, Y_gg)``: analytic lift part plus FD of ``Z``.

        Second-order centred differences inside, second-order one-sided
        differences on the boundary rows/columns.
        """
        if "comp" in self._d:
            return self._d["comp"]
        hs, hg = self.dom.hs, self.dom.hsig
        Z = self.Z
        Zs = _d1(Z, hs, 0)
        Zg = _d1(Z, hg, 1)
        Zss = _d2(Z, hs, 0)
        Zgg = _d2(Z, hg, 1)
        Zsg = _d1(Zs, hg, 1)
        L = self.lift
        out = (L.Ys + Zs, L.Yg + Zg, L.Yss + Zss, L.Ysg + Zsg, L.Ygg + Zgg)
        self._d["comp"] = out
        return out

    def derivatives(self):
        """Nodal ``(y_u, y_v, y_uu, y_uv, y_vv)`` via the chain rule."""
        if "uv" in self._d:
            return self._d["uv"]
        Ys, Yg, Yss, Ysg, Ygg = self.comp_derivatives()
        g = self.dom.geom
        D1 = np.array([Ys, Yg])
        D2 = np.array([[Yss, Ysg], [Ysg, Ygg]])
        grad = np.einsum("a...,ai...->i...", D1, g.Ji)
        hess = (np.einsum("ab...,ai...,bj...->ij...", D2, g.Ji, g.Ji)
                + np.einsum("a...,aij...->ij...", D1, g.Xi2))
        out = (grad[0], grad[1], hess[0, 0], hess[0, 1], hess[1, 1])
        self._d["uv"] = out
        return out

    def derivatives_at(self, k, sigma):
        """Derivatives at arbitrary ``(k, sigma)`` by bicubic interpolation of nodal values."""
        dom = self.dom
        k = np.asarray(k, dtype=float)
        sigma = np.asarray(sigma, dtype=float)
        if np.any((k < dom.k_left) | (k > dom.k_right) | (sigma < 0) | (sigma > 1)):
            raise OutOfDomain("point outside the strip")
        s = dom.stretch.inverse(k)
        out = []
        for arr in self.derivatives():
            spl = RectBivariateSpline(dom.s, dom.sigma, arr, kx=3, ky=3)
            out.append(spl.ev(s, sigma))
        return tuple(out)


def _d1(F, h, axis):
    F = np.moveaxis(F, axis, 0)
    D = np.empty_like(F)
    D[1:-1] = (F[2:] - F[:-2]) / (2 * h)
    D[0] = (-3 * F[0] + 4 * F[1] - F[2]) / (2 * h)
    D[-1] = (3 * F[-1] - 4 * F[-2] + F[-3]) / (2 * h)
    return np.moveaxis(D, 0, axis)


def _d2(F, h, axis):
    F = np.moveaxis(F, axis, 0)
    D = np.empty_like(F)
    D[1:-1] = (F[2:] - 2 * F[1:-1] + F[:-2]) / h ** 2
    D[0] = (2 * F[0] - 5 * F[1] + 4 * F[2] - F[3]) / h ** 2
    D[-1] = (2 * F[-1] - 5 * F[-2] + 4 * F[-3] - F[-4]) / h ** 2
    return np.moveaxis(D, 0, axis)


def solve(system: LinearSystem, tol: float = 1e-10) -> FieldGrid:
    """Sparse LU solve of the assembled system.

    Raises
    ------
    SolverBreakdown
        If the factorisation fails or the relative residual exceeds ``tol``.
    """
    A, b = system.matrix, system.rhs
    try:
        lu = splu(A, permc_spec="COLAMD")
        z = lu.solve(b)
    except RuntimeError as exc:  # singular factor
        raise SolverBreakdown(str(exc)) from exc
    if not np.all(np.isfinite(z)):
        raise SolverBreakdown("non-finite solution")
    res = float(np.linalg.norm(A @ z - b) / max(np.linalg.norm(b), 1e-300))
    if res > tol and np.linalg.norm(b) > 0:
        raise SolverBreakdown(f"relative residual {res:.2e} exceeds {tol:.0e}")
    return FieldGrid(system.dom, z.reshape(system.dom.shape), system.lift, res)


def solve_strip(W, eps, gamma, fc, eta_l, eta_r, grid=DEFAULT_GRID,
                edge_mode="truncation", lift=True) -> FieldGrid:
    """Convenience wrapper: build, assemble and solve."""
    dom = build_domain(W, eps, gamma, fc, eta_l, eta_r, grid, edge_mode, lift)
    return solve(assemble(dom, fc))


# --- method of manufactured solutions ----------------------------------------------

@dataclass(frozen=True)
class Manufactured:
    """``y(u, v) = cos(u) + v^2 + amp * sin(lam * (u^2 + v^2 - q u) / eps)``.

    The oscillating part varies by O(1) across the strip, which is
    O(eps) wide in the hodograph plane, so both directions are exercised.
    """

    eps: float
    q_bar: float
    lam: float = 0.5
    amp: float = 1.0

    def jet(self, u, v):
        """``(y, y_u, y_v, y_uu, y_uv, y_vv)``."""
        c = self.lam / self.eps
        th = c * (u * u + v * v - self.q_bar * u)
        tu, tv = c * (2 * u - self.q_bar), c * 2 * v
        tuu = tvv = 2 * c
        sn, cs = np.sin(th), np.cos(th)
        a = self.amp
        y = np.cos(u) + v * v + a * sn
        yu = -np.sin(u) + a * cs * tu
        yv = 2 * v + a * cs * tv
        yuu = -np.cos(u) + a * (cs * tuu - sn * tu * tu)
        yuv = a * (-sn * tu * tv)
        yvv = 2 + a * (cs * tvv - sn * tv * tv)
        return y, yu, yv, yuu, yuv, yvv


def mms_solve(dom: StripDomain, ms: Manufactured):
    """Solve the manufactured problem on ``dom``; return ``(max error, FieldGrid)``.

    The error is measured in the maximum norm relative to ``max |y|``.
    """
    g = dom.geom
    fc = dom.fc
    y, yu, yv, yuu, yuv, yvv = ms.jet(g.u, g.v)
    pc = interior_coeffs(Velocity(g.u, g.v), fc)
    f = pc.a_uu * yuu + pc.a_uv * yuv + pc.a_vv * yvv + pc.b_u * yu + pc.b_v * yv
    j = dom.shape[1] - 1
    Ut = Velocity(g.u[:, j], g.v[:, j])
    ob = shock_oblique_coeffs(Ut, incoming_from_flux(dom.eps, fc), fc, check=False)
    orhs = ob.I * yu[:, j] + ob.J * yv[:, j]
    dom_nl = StripDomain(**{**dom.__dict__, "lift": False})
    F = solve(assemble(dom_nl, fc, forcing=f, dirichlet=y, oblique_rhs=orhs))
    err = float(np.max(np.abs(F.y - y)) / np.max(np.abs(y)))
    return err, F


def mms_convergence(W, eps, gamma, fc, eta_l, eta_r, base=DEFAULT_GRID, levels=4,
                    ms: Manufactured = None):
    """Errors on ``levels`` successively doubled grids and the observed orders."""
    ms = ms or Manufactured(eps, fc.q_bar)
    grids, errs = [], []
    for lev in range(levels):
        grid = (base[0] * 2 ** lev, base[1] * 2 ** lev)
        dom = build_domain(W, eps, gamma, fc, eta_l, eta_r, grid, lift=False)
        errs.append(mms_solve(dom, ms)[0])
        grids.append(grid)
    errs = np.array(errs)
    orders = np.log2(errs[:-1] / errs[1:])
    return grids, errs, orders
