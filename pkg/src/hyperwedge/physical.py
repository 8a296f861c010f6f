"""Reconstruction of the physical plane from a solved hodograph field.

``x`` is recovered from ``(x_u, x_v)`` (which the hodograph relations give
in terms of ``(y_u, y_v)``) by trapezoidal integration along grid lines of
the ``(s, sigma)`` rectangle.  Because the interior equation is exactly the
compatibility condition ``(x_u)_v = (x_v)_u``, the discrete circulation
around each cell measures the discretisation error.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.spatial import cKDTree

from .diagnostics import EDGE_BUFFER, interior_mask
from .hodograph import x_gradient_from_y
from .model import FlowConstants, Velocity, sound_speed_sq


@dataclass
class PhysicalField:
    """Physical coordinates ``(x, y)`` on the strip nodes."""

    k: np.ndarray
    u: np.ndarray
    v: np.ndarray
    x: np.ndarray
    y: np.ndarray
    jac: np.ndarray
    gauge: tuple
    curl_residual: float
    curl_residual_all: float
    x_s: np.ndarray = field(repr=False)
    x_g: np.ndarray = field(repr=False)
    y_s: np.ndarray = field(repr=False)


def _edge_increments(F, fc):
    g = F.dom.geom
    U = Velocity(g.u, g.v)
    yu, yv, *_ = F.derivatives()
    xu, xv = x_gradient_from_y(U, yu, yv, fc)
    x_s = xu * g.J[0, 0] + xv * g.J[1, 0]
    x_g = xu * g.J[0, 1] + xv * g.J[1, 1]
    y_s = yu * g.J[0, 0] + yv * g.J[1, 0]
    c2 = sound_speed_sq(U, fc)
    Q = (c2 - g.u ** 2) * yv ** 2 + 2 * g.u * g.v * yu * yv + (c2 - g.v ** 2) * yu ** 2
    jac = -Q / (c2 - g.v ** 2)
    return x_s, x_g, y_s, jac


def integrate_x(F, gauge=None, fc: FlowConstants = None, path: str = "wall_first",
                buffer: float = EDGE_BUFFER) -> PhysicalField:
    """Integrate ``x`` with ``x = 0`` at the gauge node.

    ``path="wall_first"`` runs along the gauge row in ``s`` and then along
    each column in ``sigma``; ``path="columns_first"`` runs along the gauge
    column in ``sigma`` and then along each row in ``s``.  The two agree up
    to the accumulated circulation.  Default gauge: ``(nk // 2, 0)``.

    ``curl_residual`` is the largest cell circulation divided by the cell
    area over cells at least ``buffer`` away from the truncation edges and
    not touching the ``sigma`` boundary rows; ``curl_residual_all`` is the
    same over every cell.
    """
    dom = F.dom
    fc = fc or dom.fc
    hs, hg = dom.hs, dom.hsig
    nk1, ns1 = dom.shape
    gi, gj = gauge if gauge is not None else (nk1 // 2, 0)
    x_s, x_g, y_s, jac = _edge_increments(F, fc)
    ds = 0.5 * hs * (x_s[1:, :] + x_s[:-1, :])   # increments between s-neighbours
    dg = 0.5 * hg * (x_g[:, 1:] + x_g[:, :-1])   # increments between sigma-neighbours

    def cum(inc, start):
        c = np.concatenate([[0.0], np.cumsum(inc)])
        return c - c[start]

    x = np.empty((nk1, ns1))
    if path == "wall_first":
        row = cum(ds[:, gj], gi)
        for i in range(nk1):
            x[i, :] = row[i] + cum(dg[i, :], gj)
    elif path == "columns_first":
        col = cum(dg[gi, :], gj)
        for j in range(ns1):
            x[:, j] = col[j] + cum(ds[:, j], gi)
    else:
        raise ValueError(f"unknown path {path!r}")
    circ = np.abs(ds[:, :-1] + dg[1:, :] - ds[:, 1:] - dg[:-1, :]) / (hs * hg)
    g = dom.geom
    # cells away from the truncation edges and not touching sigma = 0, 1:
    # the corners where Dirichlet edges meet the oblique row are singular
    kin = interior_mask(g.k[:, 0], dom.k_left, dom.k_right, buffer)
    cells = kin[:-1] & kin[1:]
    curl = float(np.max(circ[cells][:, 1:-1]))
    return PhysicalField(g.k, g.u, g.v, x, F.y.copy(), jac, (gi, gj), curl,
                         float(np.max(circ)), x_s, x_g, y_s)


@dataclass
class JacobianReport:
    passed: bool
    sign: int
    min_abs: float
    margin: float


def jacobian_check(P: PhysicalField, rel_margin: float = 1e-12) -> JacobianReport:
    """Single-signedness of ``x_u y_v - x_v y_u`` on interior nodes.

    ``margin`` is ``min |J| / max |J|``; the check passes iff all interior
    values share a sign and the margin exceeds ``rel_margin``.
    """
    Jn = P.jac[1:-1, 1:-1]
    s = np.sign(Jn)
    one_sign = bool(np.all(s == s.flat[0]) and s.flat[0] != 0)
    mn, mx = float(np.min(np.abs(Jn))), float(np.max(np.abs(Jn)))
    margin = mn / mx if mx > 0 else 0.0
    return JacobianReport(one_sign and margin > rel_margin, int(s.flat[0]), mn, margin)


@dataclass
class Geometry:
    """Exported wall and shock curves plus summary numbers."""

    wall: np.ndarray
    shock: np.ndarray
    slip_residual: np.ndarray
    slip_sup: float
    hausdorff: float

    def summary(self):
        return {"slip_sup": self.slip_sup, "hausdorff": self.hausdorff,
                "n_wall": int(len(self.wall)), "n_shock": int(len(self.shock))}


def slip_residual(P: PhysicalField):
    """``|u - v dx/dy|`` along the wall row, relative to ``u``."""
    u, v = P.u[:, 0], P.v[:, 0]
    return np.abs(u - v * P.x_s[:, 0] / P.y_s[:, 0]) / np.abs(u)


def export_geometry(P: PhysicalField, out_dir=None, mask=None) -> Geometry:
    """Wall (``sigma = 0``) and shock (``sigma = 1``) curves in the ``(x, y)`` plane.

    Columns: ``k, x, y, u, v``.  With ``out_dir`` the curves are written to
    ``wall.csv`` / ``shock.csv`` and a ``geometry.json`` summary.  ``mask``
    restricts the slip residual sup to selected wall nodes.
    """
    cols = lambda j: np.column_stack([P.k[:, j], P.x[:, j], P.y[:, j], P.u[:, j], P.v[:, j]])
    wall, shock = cols(0), cols(-1)
    slip = slip_residual(P)
    sel = slip if mask is None else slip[mask]
    d1 = cKDTree(shock[:, 1:3]).query(wall[:, 1:3])[0].max()
    d2 = cKDTree(wall[:, 1:3]).query(shock[:, 1:3])[0].max()
    geo = Geometry(wall, shock, slip, float(sel.max()), float(max(d1, d2)))
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for name, arr in (("wall.csv", wall), ("shock.csv", shock)):
            with open(out / name, "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["k", "x", "y", "u", "v"])
                w.writerows(arr.tolist())
        (out / "geometry.json").write_text(json.dumps(geo.summary(), indent=2))
    return geo
