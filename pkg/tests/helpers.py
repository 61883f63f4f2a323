"""Random scene generators and independent checks shared by the tests."""
from __future__ import annotations

import numpy as np
from scipy.optimize import linprog, lsq_linear

from conesep import NormSpec, make_union

NORMS = ("l1", "l2", "linf")


def angle_rays(angles) -> list[list[float]]:
    return [[float(np.cos(t)), float(np.sin(t))] for t in angles]


def random_piece_2d(rng, center: float, width: float, m: int) -> list[list[float]]:
    """m rays with angles in [center - width/2, center + width/2]."""
    return angle_rays(center + width * (rng.random(m) - 0.5))


def random_piece_3d(rng, axis: np.ndarray, spread: float, m: int) -> list[list[float]]:
    """m rays within an angular cap of half-angle ``spread`` around ``axis``."""
    axis = axis / np.linalg.norm(axis)
    basis = np.linalg.svd(axis[None, :])[2][1:]
    out = []
    for _ in range(m):
        t = spread * np.sqrt(rng.random())
        phi = 2 * np.pi * rng.random()
        v = np.cos(t) * axis + np.sin(t) * (np.cos(phi) * basis[0] + np.sin(phi) * basis[1])
        out.append(v.tolist())
    return out


def random_scene(rng, dim: int):
    """(ns, K, A) with conv K pointed and A convex or a 2-piece union.

    Cone widths and positions are drawn so that both separable and
    non-separable scenes come up often.
    """
    ns = NormSpec(NORMS[rng.integers(3)], dim)
    two = rng.random() < 0.5
    if dim == 2:
        kc = rng.uniform(0, 2 * np.pi)
        K = [random_piece_2d(rng, kc, rng.uniform(0.1, 1.8), int(rng.integers(1, 4)))]
        A = []
        for _ in range(2 if two else 1):
            ac = kc + rng.uniform(0.6, 2 * np.pi - 0.6)
            A.append(random_piece_2d(rng, ac, rng.uniform(0.05, 1.5), int(rng.integers(1, 4))))
    else:
        ka = rng.normal(size=3)
        K = [random_piece_3d(rng, ka, rng.uniform(0.1, 0.9), int(rng.integers(1, 5)))]
        A = []
        for _ in range(2 if two else 1):
            aa = rng.normal(size=3)
            A.append(random_piece_3d(rng, aa, rng.uniform(0.05, 0.8), int(rng.integers(1, 5))))
    return ns, make_union(K, ns), make_union(A, ns)


def random_cone(rng, dim: int, ns: NormSpec | None = None):
    """Single piece with random Gaussian generators: pointed or not."""
    ns = ns or NormSpec(NORMS[rng.integers(3)], dim)
    m = int(rng.integers(1, dim + 3))
    return make_union([rng.normal(size=(m, dim)).tolist()], ns)


def in_hull_lp(points: np.ndarray, x: np.ndarray) -> float:
    """Smallest l-inf residual of x as a convex combination of rows of ``points``."""
    m, n = points.shape
    # variables: lam (m) >= 0, t >= 0; |P^T lam - x| <= t, sum lam = 1
    c = np.zeros(m + 1)
    c[-1] = 1.0
    A_ub = np.vstack([
        np.hstack([points.T, -np.ones((n, 1))]),
        np.hstack([-points.T, -np.ones((n, 1))]),
    ])
    b_ub = np.concatenate([x, -x])
    A_eq = np.hstack([np.ones((1, m)), np.zeros((1, 1))])
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=[1.0],
                  bounds=[(0, None)] * (m + 1), method="highs")
    assert res.status == 0, res.message
    return float(res.x[-1])


def cone_residual_ref(x: np.ndarray, G: np.ndarray) -> float:
    """Euclidean residual of x against cone(rows of G)."""
    lam = lsq_linear(G.T, x, bounds=(0.0, np.inf), method="bvls", tol=1e-14).x
    return float(np.linalg.norm(G.T @ lam - x))


def base_point_ok(cone, x, tol=1e-7) -> bool:
    """x has unit norm and lies in some piece of ``cone``."""
    if abs(float(cone.ns.norm(x)) - 1.0) > tol:
        return False
    return any(cone_residual_ref(x, P.generators) <= tol for P in cone.pieces)
