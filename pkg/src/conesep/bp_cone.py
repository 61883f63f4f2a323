"""The normlinear function phi(x) = <x*, x> + alpha ||x|| and its sublevel cones."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCone, InputError
from .geometry import DEFAULT_TOL, NormSpec, Tolerances


class Membership(str, enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EXTERIOR = "exterior"


@dataclass(frozen=True)
class BPCone:
    """C = {x : phi(x) <= 0} for phi = <xstar, .> + alpha ||.||."""

    xstar: np.ndarray
    alpha: float
    ns: NormSpec

    def __post_init__(self):
        object.__setattr__(self, "xstar", self.ns.check(self.xstar))
        if not (np.isfinite(self.alpha) and self.alpha >= 0):
            raise InputError("alpha must be a finite nonnegative number")
        object.__setattr__(self, "alpha", float(self.alpha))

    def phi(self, x):
        return phi_eval(self.ns, self.xstar, self.alpha, x)


@dataclass(frozen=True)
class BPProperties:
    nontrivial: bool
    pointed: bool
    solid: bool


def phi_eval(ns: NormSpec, xstar, alpha: float, x):
    """<x*, x> + alpha ||x||; ``x`` may be a single point or a stack of rows."""
    if alpha < 0:
        raise InputError("alpha must be nonnegative")
    x = ns.check(x)
    return x @ ns.check(xstar) + alpha * ns.norm(x)


def bp_classify(C: BPCone, x, tol: Tolerances = DEFAULT_TOL) -> Membership:
    """Interior / boundary / exterior of C by the sign of phi.

    Interior of C equals {phi < 0} only when ||x*||_* > alpha, so other
    cones are rejected.
    """
    if C.ns.dual_norm(C.xstar) <= C.alpha:
        raise DegenerateCone("||x*||_* <= alpha: the cone has empty interior")
    v = float(C.phi(x))
    if v < -tol.eps_mem:
        return Membership.INTERIOR
    if v <= tol.eps_mem:
        return Membership.BOUNDARY
    return Membership.EXTERIOR


def bp_properties(C: BPCone, tol: Tolerances = DEFAULT_TOL) -> BPProperties:
    solid = C.ns.dual_norm(C.xstar) > C.alpha + tol.eps_sep
    return BPProperties(nontrivial=bool(solid), pointed=bool(C.alpha > tol.eps_sep), solid=bool(solid))


def bp_from_functional(ystar, ns: NormSpec) -> BPCone:
    """The Bishop-Phelps cone C(y*) = {x : <y*, x> >= ||x||} as the sublevel cone of (-y*, 1)."""
    return BPCone(-ns.check(ystar), 1.0, ns)


def bishop_phelps_functional(C: BPCone) -> np.ndarray:
    """y* with C = C(y*), namely -x*/alpha (requires alpha > 0)."""
    if C.alpha <= 0:
        raise DegenerateCone("alpha = 0 gives a halfspace, not a Bishop-Phelps cone")
    return -C.xstar / C.alpha


def in_bishop_phelps(ystar, x, ns: NormSpec, tol: Tolerances = DEFAULT_TOL):
    """Membership in C(y*) evaluated directly from its definition (vectorised over rows)."""
    x = ns.check(x)
    return x @ ns.check(ystar) - ns.norm(x) >= -tol.eps_mem
