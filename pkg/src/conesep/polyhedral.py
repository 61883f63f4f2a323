"""Double-description style conversions for small polyhedral cones.

A cone is cut by one halfspace at a time.  For a generating set R and a
halfspace {h >= 0} the intersection is generated by the rays with
h(r) >= 0 together with h(p) n - h(n) p for every pair with h(p) > 0 >
h(n).  No adjacency test is needed for correctness; redundant rays are
pruned with an NNLS membership check after every cut, which keeps the
generating sets small at desk scale.
"""
from __future__ import annotations

import itertools

import numpy as np

from .errors import UnsupportedScale
from .geometry import DEFAULT_TOL, NormMode, Tolerances, cone_residual

MAX_RAYS = 4000


def _unit_rows(R: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(R, axis=1)
    keep = n > 1e-13
    return R[keep] / n[keep, None]


def _dedupe(R: np.ndarray, tol: float) -> np.ndarray:
    if len(R) == 0:
        return R
    R = _unit_rows(R)
    kept: list[np.ndarray] = []
    for r in R:
        if not any(float(r @ k) >= 1.0 - tol for k in kept):
            kept.append(r)
    return np.array(kept).reshape(-1, R.shape[1])


def prune_redundant(R: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Drop rays that lie in the cone generated by the remaining ones."""
    R = _dedupe(R, 1e-12)
    keep = list(range(len(R)))
    for i in range(len(R) - 1, -1, -1):
        others = [j for j in keep if j != i]
        if not others:
            continue
        if cone_residual(R[i], R[others], tol) <= 1e-10:
            keep.remove(i)
    return R[keep]


def cut(R: np.ndarray, h: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Generators of cone(R) intersected with {x : <h, x> >= 0}."""
    vals = R @ h
    band = 1e-12
    pos, zero, neg = R[vals > band], R[np.abs(vals) <= band], R[vals < -band]
    vp, vn = vals[vals > band], vals[vals < -band]
    new = [pos, zero]
    if len(pos) and len(neg):
        if len(pos) * len(neg) > MAX_RAYS * 10:
            raise UnsupportedScale("double description grew beyond desk scale")
        combos = vp[:, None, None] * neg[None, :, :] - vn[None, :, None] * pos[:, None, :]
        new.append(combos.reshape(-1, R.shape[1]))
    out = np.vstack(new)
    out = prune_redundant(out, tol)
    if len(out) > MAX_RAYS:
        raise UnsupportedScale("double description grew beyond desk scale")
    return out


def intersect_halfspaces(R: np.ndarray, normals: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    R = np.asarray(R, dtype=float)
    for h in np.atleast_2d(normals):
        R = cut(R, h, tol)
        if len(R) == 0:
            break
    return R


def dual_generators(G: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Generators of cone(G)^+ = {y : <g, y> >= 0 for every row g of G}.

    Since cone(G) is closed, x lies in cone(G) iff <h, x> >= 0 for every
    returned row h; this is the inequality description of the cone.
    """
    n = G.shape[1]
    start = np.vstack([np.eye(n), -np.eye(n)])
    return intersect_halfspaces(start, G, tol)


def ball_facets(mode: NormMode, n: int) -> np.ndarray:
    """Outer normals b of the polyhedral unit ball {x : <b, x> <= 1}."""
    if mode is NormMode.L1:
        return np.array(list(itertools.product((1.0, -1.0), repeat=n)))
    if mode is NormMode.LINF:
        return np.vstack([np.eye(n), -np.eye(n)])
    raise ValueError("the l2 ball is not polyhedral")


def base_vertices(G: np.ndarray, mode: NormMode, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Unit-norm vertices of cone(G) intersected with a polyhedral unit ball.

    Works on the homogenisation {(x, t) : x in cone(G), t >= <b, x>} whose
    rays with t > 0 are the vertices of cone(G) cap ball after scaling to
    t = 1.  Every extreme point of conv(B_K) is among the returned points,
    and every returned point lies in B_K.
    """
    m, n = G.shape
    facets = ball_facets(mode, n)
    R = np.vstack([np.hstack([G, np.zeros((m, 1))]), np.eye(1, n + 1, n)])
    H = np.hstack([-facets, np.ones((len(facets), 1))])
    R = intersect_halfspaces(R, H, tol)
    R = R[R[:, -1] > 1e-12]
    pts = R[:, :n] / R[:, -1:]
    norms = np.linalg.norm(pts, ord=1 if mode is NormMode.L1 else np.inf, axis=1)
    pts = pts[np.abs(norms - 1.0) <= 1e-9]
    return pts / np.linalg.norm(pts, ord=1 if mode is NormMode.L1 else np.inf, axis=1)[:, None]
