"""Brute-force grid references for dimensions 2 and 3.

Nothing here uses the face enumeration, double description or closest-pair
code of the exact path.  Cone membership of grid directions is decided by
Caratheodory: in R^d a point of cone(G) is a nonnegative combination of at
most d generators, so it suffices to try every d-subset (and every pair,
for the faces).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .cones import Cone, FinGenCone, as_union
from .errors import InputError, UnsupportedScale
from .geometry import DEFAULT_TOL, NormSpec, Tolerances


@dataclass(frozen=True)
class OracleConfig:
    grid_count: int = 100_000
    grid_count_3d: int = 200_000
    edge_count: int = 2_000
    seed: int = 0

    def __post_init__(self):
        if self.grid_count < 1000 or self.grid_count_3d < 1000:
            raise InputError("grid_count must be at least 1000")


def _directions(dim: int, cfg: OracleConfig) -> np.ndarray:
    if dim == 2:
        t = np.linspace(0.0, 2 * np.pi, cfg.grid_count, endpoint=False)
        return np.column_stack([np.cos(t), np.sin(t)])
    if dim == 3:
        # Fibonacci sphere
        k = np.arange(cfg.grid_count_3d) + 0.5
        z = 1 - 2 * k / cfg.grid_count_3d
        r = np.sqrt(1 - z * z)
        phi = np.pi * (1 + 5 ** 0.5) * k
        return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    raise UnsupportedScale("oracles are restricted to dimension 2 and 3")


def _piece_mask(G: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Which rows of X lie in cone(G), by trying all full-rank d-subsets."""
    m, d = G.shape
    mask = np.zeros(len(X), dtype=bool)
    for S in itertools.combinations(range(m), min(d, m)):
        B = G[list(S)].T
        if len(S) < d or abs(np.linalg.det(B)) < 1e-12:
            continue
        lam = np.linalg.solve(B, X.T)
        mask |= np.all(lam >= -1e-12, axis=0)
    return mask


def _edge_points(G: np.ndarray, ns: NormSpec, count: int) -> np.ndarray:
    """Points on the bases of the two-generator faces (and lower-dimensional pieces)."""
    t = np.linspace(0.0, 1.0, count)[:, None]
    pts = [G]
    for i, j in itertools.combinations(range(len(G)), 2):
        seg = (1 - t) * G[i] + t * G[j]
        nrm = ns.norm(seg)
        pts.append(seg[nrm > 1e-12] / nrm[nrm > 1e-12, None])
    return np.vstack(pts)


def grid_base(K: Cone, cfg: OracleConfig = OracleConfig()) -> np.ndarray:
    """Unit-norm points of K: grid directions inside K plus edge and generator points."""
    U = as_union(K)
    ns = U.ns
    D = _directions(ns.dim, cfg)
    out = []
    for P in U.pieces:
        G = P.generators
        out.append(D[_piece_mask(G, D)])
        out.append(_edge_points(G, ns, cfg.edge_count))
    X = np.vstack(out)
    return X / ns.norm(X)[:, None]


def oracle_mu(K: Cone, c, cfg: OracleConfig = OracleConfig()) -> float:
    """Grid minimum of <c, .> over B_K; an upper bound on the exact minimum."""
    U = as_union(K)
    c = U.ns.check(c)
    return float(np.min(grid_base(U, cfg) @ c))


def oracle_separation(K: Cone, A: Cone, cert, cfg: OracleConfig = OracleConfig(),
                      tol: Tolerances = DEFAULT_TOL) -> bool:
    """Sign check of phi on gridded A \\ {0} and -K \\ {0} directions."""
    K, A = as_union(K), as_union(A)
    ns = K.ns
    xs = ns.check(cert.xstar)
    a_pts = grid_base(A, cfg)
    k_pts = -grid_base(K, cfg)
    phi_a = a_pts @ xs + cert.alpha * ns.norm(a_pts)
    phi_k = k_pts @ xs + cert.alpha * ns.norm(k_pts)
    return bool(np.all(phi_a > tol.eps_sep) and np.all(phi_k < -tol.eps_sep))


def oracle_cor_test(K: Cone, p, cfg: OracleConfig = OracleConfig(), directions: int = 100) -> bool:
    """Algebraic-interior test of (x*, alpha) in K^{a+} by perturbation.

    For random unit directions (y*, beta) the pair is pushed to
    (x* + eps y*, alpha + eps beta) for eps = 2^-1, 2^-2, ...; a direction
    passes if some eps keeps the pair in K^{a+} (grid-checked, alpha >= 0).
    The pair is in cor K^{a+} iff every direction passes.
    """
    U = as_union(K)
    X = grid_base(U, cfg)
    rng = np.random.default_rng(cfg.seed)
    xs = np.asarray(p.xstar, dtype=float)
    n = U.dim
    Q = rng.normal(size=(directions, n + 1))
    Q /= np.linalg.norm(Q, axis=1)[:, None]
    # fixed axis directions make the boundary cases deterministic
    Q = np.vstack([np.eye(n + 1), -np.eye(n + 1), Q])
    eps = 2.0 ** -np.arange(1, 41)
    base_vals = X @ xs
    for q in Q:
        ys, beta = q[:n], q[n]
        dir_vals = X @ ys
        passed = False
        for e in eps:
            a = p.alpha + e * beta
            if a >= 0 and np.min(base_vals + e * dir_vals) >= a:
                passed = True
                break
        if not passed:
            return False
    return True
