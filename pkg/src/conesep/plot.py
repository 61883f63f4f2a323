"""CSV plot data for planar scenes (rendering is left to external tools)."""
from __future__ import annotations

import csv
import io
from typing import Optional

import numpy as np
from scipy.optimize import brentq
from scipy.spatial import ConvexHull, QhullError

from .base_oracle import sample_base
from .cones import ConeUnion
from .errors import UnsupportedScale
from .geometry import NormSpec

BP_ANGLES = 512


def _hull_polygon(pts: np.ndarray) -> np.ndarray:
    try:
        hull = ConvexHull(pts)
    except (QhullError, ValueError):
        # degenerate (segment or point): the extreme points along the main axis
        if len(pts) < 2:
            return pts
        d = pts - pts.mean(axis=0)
        axis = np.linalg.svd(d, full_matrices=False)[2][0]
        t = d @ axis
        return pts[[int(np.argmin(t)), int(np.argmax(t))]]
    return pts[hull.vertices]


def _bp_boundary(ns: NormSpec, xstar, alpha) -> np.ndarray:
    """Unit points (Euclidean) of the rays where phi changes sign, found on an angular scan."""
    t = np.linspace(0.0, 2 * np.pi, BP_ANGLES, endpoint=False)
    U = np.column_stack([np.cos(t), np.sin(t)])
    phi = U @ xstar + alpha * ns.norm(U)
    out = []
    for i in range(BP_ANGLES):
        j = (i + 1) % BP_ANGLES
        if phi[i] == 0.0:
            out.append(U[i])
        elif phi[i] * phi[j] < 0:
            t1 = t[j] if j else 2 * np.pi

            def f(s):
                u = np.array([np.cos(s), np.sin(s)])
                return float(u @ xstar + alpha * ns.norm(u))

            s = brentq(f, t[i], t1, xtol=1e-13)
            out.append([np.cos(s), np.sin(s)])
    return np.array(out).reshape(-1, 2)


def _hyperplane_segment(ns: NormSpec, xstar, alpha) -> Optional[np.ndarray]:
    """Endpoints of {x : <x*, x> = -alpha} within the unit ball of the scene norm."""
    nrm2 = float(xstar @ xstar)
    if nrm2 == 0:
        return None
    p0 = -alpha * xstar / nrm2
    if ns.norm(p0) > 1:
        return None
    d = np.array([-xstar[1], xstar[0]]) / np.sqrt(nrm2)

    def g(s):
        return ns.norm(p0 + s * d) - 1.0

    hi = 4.0
    ends = [p0 + brentq(g, 0.0, hi) * d, p0 + brentq(g, -hi, 0.0) * d]
    return np.array(ends)


def export_plot(K: ConeUnion, A: ConeUnion, cert=None, samples: int = 256, seed: int = 0) -> str:
    """CSV text with rows ``label,x,y``.

    Labels: A_ray / K_ray (origin and unit point of every generator ray),
    A_base / K_base (sampled norm-bases of A and -K), A_hull / K_hull
    (polygons of cl S_A^0 and cl S_{-K}) and, with a certificate,
    BP_boundary and hyperplane.  K_* rows describe -K, the cone being
    separated.
    """
    ns = K.ns
    if ns.dim != 2:
        raise UnsupportedScale("plot export supports dimension 2 only")
    negK = K.negate()
    rows: list[tuple[str, float, float]] = []

    def emit(label, pts):
        rows.extend((label, float(x), float(y)) for x, y in np.atleast_2d(pts))

    for label, cone in (("A_ray", A), ("K_ray", negK)):
        for g in cone.all_generators:
            emit(label, [[0.0, 0.0], g])
    a_base = sample_base(A, samples, seed)
    k_base = sample_base(negK, samples, seed + 1)
    emit("A_base", a_base)
    emit("K_base", k_base)
    emit("A_hull", _hull_polygon(np.vstack([a_base, np.zeros((1, 2))])))
    emit("K_hull", _hull_polygon(k_base))
    if cert is not None:
        xs, al = np.asarray(cert.xstar, float), float(cert.alpha)
        for u in _bp_boundary(ns, xs, al):
            emit("BP_boundary", [[0.0, 0.0], u])
        seg = _hyperplane_segment(ns, xs, al)
        if seg is not None:
            emit("hyperplane", seg)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["label", "x", "y"])
    for label, x, y in rows:
        w.writerow([label, "%.17g" % x, "%.17g" % y])
    return buf.getvalue()
