"""Extreme values of linear functionals over norm-bases B_K = K cap S.

The hulls S_K = conv(B_K) and S_K^0 = conv({0} cup B_K) are never built
explicitly; they are accessed only through these support queries.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .cones import Cone, ConeUnion, FinGenCone, _zero_in_conv, as_union
from .errors import UnsupportedScale
from .geometry import DEFAULT_TOL, NormMode, Tolerances, project_onto_cone

MAX_EXACT_GENERATORS = 12


@dataclass(frozen=True)
class BaseQueryResult:
    value: float
    argpoint: np.ndarray
    exact: bool = True


def _check_cap(P: FinGenCone):
    if P.m > MAX_EXACT_GENERATORS:
        raise UnsupportedScale(
            f"exact base queries support at most {MAX_EXACT_GENERATORS} generators per piece, got {P.m}"
        )


def _face_projectors(P: FinGenCone) -> np.ndarray:
    """Orthogonal projectors onto span(F) for independent generator subsets F."""
    cache = P.__dict__.get("_face_projectors")
    if cache is not None:
        return cache
    G = P.generators
    mats = []
    seen: list[np.ndarray] = []
    for k in range(2, min(P.m, P.dim) + 1):
        for F in itertools.combinations(range(P.m), k):
            Q, R = np.linalg.qr(G[list(F)].T)
            if np.min(np.abs(np.diag(R))) < 1e-10:
                continue
            proj = Q @ Q.T
            if any(np.allclose(proj, s, atol=1e-12) for s in seen):
                continue
            seen.append(proj)
            mats.append(proj)
    out = np.array(mats).reshape(-1, P.dim, P.dim)
    P.__dict__["_face_projectors"] = out
    return out


def _candidates_l2(P: FinGenCone, c: np.ndarray) -> np.ndarray:
    """Base points that can minimise <c, .> over B_P in the Euclidean case.

    A minimiser lies in the relative interior of some face F, where it is
    the minimiser of <c, .> over the unit sphere of span(F), namely
    -proj_F(c) / |proj_F(c)|.  Generators cover the one-dimensional faces
    and faces on which c vanishes.
    """
    cands = [P.generators]
    projs = _face_projectors(P)
    if len(projs):
        v = -(projs @ c)
        nv = np.linalg.norm(v, axis=1)
        v = v[nv > 1e-14] / nv[nv > 1e-14, None]
        if len(v):
            H = P.inequalities
            ok = np.all(v @ H.T >= -1e-10, axis=1)
            cands.append(v[ok])
    return np.vstack(cands)


def _piece_extreme(P: FinGenCone, c: np.ndarray, sign: float, tol: Tolerances) -> tuple[float, np.ndarray]:
    """min (sign=+1) or max (sign=-1) of <c, .> over B_P."""
    _check_cap(P)
    if P.ns.mode is NormMode.L2:
        if sign < 0:
            proj = project_onto_cone(c, P.generators, tol)
            nrm = float(np.linalg.norm(proj))
            if nrm > 1e-12:
                # Moreau: max over K cap ball of <c, .> is |proj|, attained on the sphere
                x = proj / nrm
                return float(c @ x), x
        pts = _candidates_l2(P, sign * c)
    else:
        pts = P.polyhedral_base
    vals = pts @ c
    i = int(np.argmin(vals) if sign > 0 else np.argmax(vals))
    return float(vals[i]), pts[i].copy()


def mu_base(K: Cone, c, tol: Tolerances = DEFAULT_TOL) -> BaseQueryResult:
    """inf over B_K of <c, x>, exact, with a base point attaining it."""
    U = as_union(K)
    c = U.ns.check(c)
    best = min((_piece_extreme(P, c, 1.0, tol) for P in U.pieces), key=lambda t: t[0])
    return BaseQueryResult(best[0], best[1], True)


def sigma_base(K: Cone, c, tol: Tolerances = DEFAULT_TOL) -> BaseQueryResult:
    """sup over B_K of <c, x>: the support function of S_K."""
    U = as_union(K)
    c = U.ns.check(c)
    best = max((_piece_extreme(P, c, -1.0, tol) for P in U.pieces), key=lambda t: t[0])
    return BaseQueryResult(best[0], best[1], True)


def zero_in_cl_S(K: Cone, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Decide 0 in cl S_K through the LP ``0 in conv(normalised generators)``.

    Every x in B_K is sum lam_i g_i with unit-norm generators of one piece,
    so 1 = |x| <= sum lam_i and x = s y with s >= 1 and y in conv(g_i).
    Hence 0 in conv(B_K) iff 0 in conv(g_i); both hulls are compact, so the
    closure changes nothing.
    """
    U = as_union(K)
    return _zero_in_conv(U.all_generators, tol) is not None


def _dirichlet_points(P: FinGenCone, count: int, rng: np.random.Generator) -> np.ndarray:
    if count <= 0:
        return np.empty((0, P.dim))
    # mix flat and sparse weights so edges of the base are covered too
    conc = np.where(rng.random(count) < 0.5, 1.0, 0.25)
    W = rng.gamma(np.repeat(conc[:, None], P.m, axis=1))
    W /= W.sum(axis=1, keepdims=True)
    X = W @ P.generators
    nrm = P.ns.norm(X)
    X = X[nrm > 1e-12]
    return X / P.ns.norm(X)[:, None]


def sample_base(K: Cone, count: int, seed: int = 0) -> np.ndarray:
    """Deterministic base points: all normalised generators, then random ones.

    The output has ``max(count, #generators)`` rows.  Weights are
    Dirichlet-like, so the sample is not uniform on the base.
    """
    U = as_union(K)
    rng = np.random.default_rng(seed)
    gens = U.all_generators
    extra = max(count - len(gens), 0)
    counts = rng.multinomial(extra, np.full(len(U.pieces), 1.0 / len(U.pieces))) if extra else [0] * len(U.pieces)
    chunks = [gens] + [_dirichlet_points(P, int(k), rng) for P, k in zip(U.pieces, counts)]
    out = np.vstack(chunks)
    while len(out) < max(count, len(gens)):  # degenerate combinations were dropped
        out = np.vstack([out, _dirichlet_points(U.pieces[0], max(count, len(gens)) - len(out), rng)])
    return out


def _facet_cones(P: FinGenCone) -> list[FinGenCone]:
    """Cones spanned by the facets of a piece (the piece itself if it is not solid)."""
    if P.rank < P.dim:
        return [P]
    out = []
    G = P.generators
    for h in P.inequalities:
        on = np.abs(G @ h) <= 1e-9
        if on.sum() == 0 or np.linalg.matrix_rank(G[on], tol=1e-10) != P.dim - 1:
            continue
        out.append(FinGenCone(G[on], P.ns))
    return out


def _strictly_interior(P: FinGenCone, x: np.ndarray, tol: Tolerances) -> bool:
    if P.rank < P.dim:
        return False
    H = P.inequalities
    H = H / np.linalg.norm(H, axis=1)[:, None]
    return bool(np.all(H @ x > tol.eps_mem))


def boundary_base_sample(A: Cone, count: int, seed: int = 0, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Sample B_{bd A}: facet bases of every piece, minus points interior to another piece.

    Points on a facet shared by two pieces are kept even if the union
    covers a neighbourhood of them, so the sample may be a superset of the
    true boundary base.
    """
    U = as_union(A)
    if U.dim > 3:
        raise UnsupportedScale("boundary sampling is implemented for dimension <= 3")
    facets = [(i, F) for i, P in enumerate(U.pieces) for F in _facet_cones(P)]
    per = max(1, -(-count // max(len(facets), 1)))
    kept = []
    for j, (i, F) in enumerate(facets):
        pts = sample_base(F, per, seed + 7919 * j)
        for x in pts:
            if not any(_strictly_interior(Q, x, tol) for k, Q in enumerate(U.pieces) if k != i):
                kept.append(x)
    return np.array(kept).reshape(-1, U.dim)
