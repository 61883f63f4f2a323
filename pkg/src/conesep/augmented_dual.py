"""Classification of pairs (x*, alpha) against the augmented dual cone of K.

With mu = min over B_K of x*:

* K^{a+}:      mu >= alpha          (x*(y) >= alpha ||y|| on K)
* K^{a#}:      mu >  alpha          (strict on the compact base)
* K^{aw#}:     same test as K^{a#}; in R^n the weak closure of B_K is B_K
* cor K^{a+}:  mu >  alpha > 0
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .base_oracle import mu_base
from .cones import Cone, as_union
from .errors import InputError, NoPositivePair, NumericalFailure
from .geometry import DEFAULT_TOL, Tolerances


@dataclass(frozen=True)
class AugPair:
    xstar: np.ndarray
    alpha: float

    def __post_init__(self):
        xs = np.asarray(self.xstar, dtype=float)
        if not np.all(np.isfinite(xs)) or not np.isfinite(self.alpha):
            raise InputError("pair must be finite")
        if self.alpha < 0:
            raise InputError("alpha must be nonnegative")
        object.__setattr__(self, "xstar", xs)
        object.__setattr__(self, "alpha", float(self.alpha))

    def scaled(self, lam: float) -> "AugPair":
        return AugPair(lam * self.xstar, lam * self.alpha)


@dataclass(frozen=True)
class AugClassification:
    in_a_plus: bool
    in_a_sharp: bool
    in_aw_sharp: bool
    in_cor_a_plus: bool
    mu: float


def classify_aug_pair(K: Cone, p: AugPair, tol: Tolerances = DEFAULT_TOL) -> AugClassification:
    mu = mu_base(K, p.xstar, tol).value
    plus = mu >= p.alpha - tol.eps_mem
    sharp = mu > p.alpha + tol.eps_sep
    return AugClassification(
        in_a_plus=bool(plus),
        in_a_sharp=bool(sharp),
        in_aw_sharp=bool(sharp),
        in_cor_a_plus=bool(sharp and p.alpha > tol.eps_sep),
        mu=float(mu),
    )


def construct_positive_pair(K: Cone, xstar, tol: Tolerances = DEFAULT_TOL) -> AugPair:
    """Return (x*, c) with c = min over B_K of x*, provided c > 0."""
    res = mu_base(K, xstar, tol)
    if res.value <= tol.eps_sep:
        raise NoPositivePair(
            f"min of x* over the norm-base is {res.value:.3g}; x* is not strictly positive on K"
        )
    return AugPair(np.asarray(xstar, dtype=float), res.value)


def sharp_functional(K: Cone, tol: Tolerances = DEFAULT_TOL) -> np.ndarray | None:
    """Some x* with <x*, g> >= 1 on every normalised generator, or None.

    By Gordan's alternative this exists iff 0 is not in the convex hull of
    the normalised generators.  Among the feasible functionals the LP picks
    one of least max-coordinate.
    """
    G = as_union(K).all_generators
    m, n = G.shape
    # variables: x (free, n), t >= 0 ; minimise t ; -G x <= -1 ; |x_i| <= t
    c = np.concatenate([np.zeros(n), [1.0]])
    A_ub = np.vstack([
        np.hstack([-G, np.zeros((m, 1))]),
        np.hstack([np.eye(n), -np.ones((n, 1))]),
        np.hstack([-np.eye(n), -np.ones((n, 1))]),
    ])
    b_ub = np.concatenate([-np.ones(m), np.zeros(2 * n)])
    bounds = [(None, None)] * n + [(0, None)]
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if res.status == 2:
        return None
    if res.status != 0:
        raise NumericalFailure(f"LP solver failed: {res.message}")
    x = res.x[:n]
    if np.min(G @ x) < 1.0 - 1e-6:
        return None
    return x


def find_positive_pair(K: Cone, tol: Tolerances = DEFAULT_TOL) -> AugPair:
    """A pair in K^{a+} with alpha > 0, or NoPositivePair if 0 is in cl S_K."""
    xs = sharp_functional(K, tol)
    if xs is None:
        raise NoPositivePair("0 lies in cl S_K; no positive pair exists")
    return construct_positive_pair(K, xs, tol)
