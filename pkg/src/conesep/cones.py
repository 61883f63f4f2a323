"""Finitely generated cones and finite unions of them.

A convex piece is ``cone(G) = {sum_i lam_i g_i : lam >= 0}``; a nonconvex
cone is a union of such pieces.  Finitely generated cones are closed, so
closure operators act as the identity on pieces and as hull closure on
unions.  Generators are stored one per row, normalised to unit scene norm.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Union

import numpy as np

from .errors import InputError
from .geometry import DEFAULT_TOL, NormMode, NormSpec, Tolerances, in_cone, lp_feasible
from . import polyhedral


@dataclass(frozen=True, eq=False)
class FinGenCone:
    generators: np.ndarray  # (m, n), unit scene norm, pairwise non-parallel
    ns: NormSpec

    @property
    def dim(self) -> int:
        return self.ns.dim

    @property
    def m(self) -> int:
        return self.generators.shape[0]

    @cached_property
    def rank(self) -> int:
        return int(np.linalg.matrix_rank(self.generators, tol=1e-10))

    @cached_property
    def inequalities(self) -> np.ndarray:
        """Rows h with cone = {x : H x >= 0} (generators of the dual cone)."""
        return polyhedral.dual_generators(self.generators)

    @cached_property
    def polyhedral_base(self) -> np.ndarray:
        """Unit-norm vertices of cone cap ball for the l1 / l-inf norms."""
        return polyhedral.base_vertices(self.generators, self.ns.mode)

    def contains(self, x, tol: Tolerances = DEFAULT_TOL) -> bool:
        return in_cone(x, self.generators, tol)

    def negate(self) -> "FinGenCone":
        return FinGenCone(-self.generators, self.ns)

    def _sorted_generators(self) -> np.ndarray:
        # generator order is irrelevant to the cone
        G = self.generators
        return G[np.lexsort(G.T[::-1])]

    def __eq__(self, other):
        return (
            isinstance(other, FinGenCone)
            and self.ns == other.ns
            and self.generators.shape == other.generators.shape
            and bool(np.array_equal(self._sorted_generators(), other._sorted_generators()))
        )

    def __hash__(self):
        return hash((self.ns, self._sorted_generators().tobytes()))

    def __repr__(self):
        return f"FinGenCone({self.generators.tolist()}, {self.ns.mode.value})"


@dataclass(frozen=True)
class ConeUnion:
    pieces: tuple[FinGenCone, ...]

    def __post_init__(self):
        pieces = tuple(self.pieces)
        if not pieces:
            raise InputError("a cone union needs at least one piece")
        if len({p.ns for p in pieces}) != 1:
            raise InputError("all pieces must share one norm and dimension")
        object.__setattr__(self, "pieces", pieces)

    @property
    def ns(self) -> NormSpec:
        return self.pieces[0].ns

    @property
    def dim(self) -> int:
        return self.ns.dim

    @property
    def all_generators(self) -> np.ndarray:
        return np.vstack([p.generators for p in self.pieces])

    def contains(self, x, tol: Tolerances = DEFAULT_TOL) -> bool:
        return any(p.contains(x, tol) for p in self.pieces)

    def negate(self) -> "ConeUnion":
        return ConeUnion(tuple(p.negate() for p in self.pieces))


Cone = Union[FinGenCone, ConeUnion]


def as_union(K: Cone) -> ConeUnion:
    return K if isinstance(K, ConeUnion) else ConeUnion((K,))


def validate_cone(raw, ns: NormSpec, tol: Tolerances = DEFAULT_TOL) -> FinGenCone:
    """Build a piece from raw generators (one per row).

    Zero generators are rejected, the rest are normalised in the scene norm
    and parallel duplicates (cosine >= 1 - eps_mem) are merged.
    """
    G = np.asarray(raw, dtype=float)
    if G.size == 0:
        raise InputError("empty generator list")
    if G.ndim == 1:
        G = G[None, :]
    if G.ndim != 2:
        raise InputError("generators must form a matrix")
    G = ns.check(G)
    if np.any(ns.norm(G) <= tol.eps_mem):
        raise InputError("zero generator")
    unit2 = G / np.linalg.norm(G, axis=1)[:, None]
    keep: list[int] = []
    for i in range(len(G)):
        if all(float(unit2[i] @ unit2[j]) < 1.0 - tol.eps_mem for j in keep):
            keep.append(i)
    return FinGenCone(ns.normalize(G[keep]), ns)


def make_union(pieces: Sequence, ns: NormSpec, tol: Tolerances = DEFAULT_TOL) -> ConeUnion:
    if len(pieces) == 0:
        raise InputError("a cone needs at least one piece")
    return ConeUnion(tuple(p if isinstance(p, FinGenCone) else validate_cone(p, ns, tol) for p in pieces))


@dataclass(frozen=True)
class PointedResult:
    pointed: bool
    lineality_witness: np.ndarray | None = None


def _zero_in_conv(U: np.ndarray, tol: Tolerances):
    """Weights lam >= 0, sum lam = 1 with U^T lam = 0, or None."""
    m, n = U.shape
    A = np.vstack([U.T, np.ones((1, m))])
    b = np.concatenate([np.zeros(n), [1.0]])
    return lp_feasible(A, b, m, tol)


def is_pointed(K: FinGenCone, tol: Tolerances = DEFAULT_TOL) -> PointedResult:
    """Decide K cap (-K) = {0} via the LP ``0 in conv(normalised generators)``.

    If the LP is feasible, sum_i lam_i g_i = 0 and the single term
    x = lam_j g_j (largest weight) satisfies x in K and -x = sum_{i != j}
    lam_i g_i in K, so x spans a line inside K.
    """
    lam = _zero_in_conv(K.generators, tol)
    if lam is None:
        return PointedResult(True, None)
    j = int(np.argmax(lam))
    return PointedResult(False, K.generators[j].copy())


def dual_cone_membership(K: Cone, y, tol: Tolerances = DEFAULT_TOL) -> bool:
    """y in K^+, tested on generators (K^+ = (conv K)^+)."""
    U = as_union(K)
    y = U.ns.check(y)
    return bool(np.all(U.all_generators @ y >= -tol.eps_mem))


def sharp_membership(K: Cone, y, tol: Tolerances = DEFAULT_TOL) -> bool:
    """y in K^#: strictly positive on K \\ {0}.

    Checked on the normalised generators and, independently, through the
    minimum of y over the norm-base.
    """
    from .base_oracle import mu_base

    U = as_union(K)
    y = U.ns.check(y)
    if not np.all(U.all_generators @ y > tol.eps_mem):
        return False
    return mu_base(U, y, tol).value > tol.eps_mem


def conv_hull_cone(A: Cone, tol: Tolerances = DEFAULT_TOL) -> FinGenCone:
    """cl(conv A) for a finite union: the cone of all generators together."""
    U = as_union(A)
    if len(U.pieces) == 1:
        return U.pieces[0]
    return validate_cone(U.all_generators, U.ns, tol)


def cones_intersect_trivially(A: Cone, B: Cone, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff every piece P of A meets every piece of B only in the origin.

    Per pair, the LP ``P lam = B mu, lam, mu >= 0, sum lam = 1`` is
    infeasible exactly when P cap B = {0}.
    """
    for P in as_union(A).pieces:
        for Q in as_union(B).pieces:
            mp, mq, n = P.m, Q.m, P.dim
            Aeq = np.vstack([
                np.hstack([P.generators.T, -Q.generators.T]),
                np.concatenate([np.ones(mp), np.zeros(mq)])[None, :],
            ])
            b = np.concatenate([np.zeros(n), [1.0]])
            if lp_feasible(Aeq, b, mp + mq, tol) is not None:
                return False
    return True


def is_l2(K: Cone) -> bool:
    return as_union(K).ns.mode is NormMode.L2
