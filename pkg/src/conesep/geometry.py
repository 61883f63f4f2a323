"""Norms, dual norms, Euclidean projection onto polyhedral cones and LP helpers.

Vectors of R^n double as elements x of E and functionals x* of E*; the
pairing is the ordinary dot product.  Only the l1, l2 and l-infinity norm
families are supported, which keeps the dual norm available in closed form.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog, lsq_linear, nnls

from .errors import InputError, NumericalFailure


@dataclass(frozen=True)
class Tolerances:
    """Numerical margin policy.

    eps_mem is the band used for membership ties; eps_sep is the margin a
    strict inequality must clear before it is certified.
    """

    eps_mem: float = 1e-9
    eps_sep: float = 1e-7
    max_iter: int = 10_000

    def __post_init__(self):
        if not (self.eps_mem > 0 and self.eps_sep > 0 and self.max_iter >= 1):
            raise InputError("tolerances must be positive")


DEFAULT_TOL = Tolerances()


class NormMode(str, enum.Enum):
    L1 = "l1"
    L2 = "l2"
    LINF = "linf"

    @property
    def dual(self) -> "NormMode":
        return _DUAL[self]


_DUAL = {NormMode.L1: NormMode.LINF, NormMode.LINF: NormMode.L1, NormMode.L2: NormMode.L2}
_ORD = {NormMode.L1: 1, NormMode.L2: 2, NormMode.LINF: np.inf}


@dataclass(frozen=True)
class NormSpec:
    mode: NormMode
    dim: int

    def __post_init__(self):
        try:
            object.__setattr__(self, "mode", NormMode(self.mode))
        except ValueError:
            raise InputError(f"unknown norm {self.mode!r}; expected l1, l2 or linf") from None
        if int(self.dim) != self.dim or self.dim < 2:
            raise InputError(f"dimension must be an integer >= 2, got {self.dim!r}")

    @property
    def dual(self) -> "NormSpec":
        return NormSpec(self.mode.dual, self.dim)

    def check(self, v) -> np.ndarray:
        """Return ``v`` as a float array whose last axis has length ``dim``."""
        arr = np.asarray(v, dtype=float)
        if arr.ndim == 0 or arr.shape[-1] != self.dim:
            raise InputError(f"expected vectors of length {self.dim}, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InputError("non-finite coordinates")
        return arr

    def norm(self, v) -> np.ndarray | float:
        """Norm along the last axis (works on a single vector or a stack)."""
        return _norm(self.check(v), self.mode)

    def dual_norm(self, f) -> np.ndarray | float:
        return _norm(self.check(f), self.mode.dual)

    def normalize(self, v) -> np.ndarray:
        arr = self.check(v)
        nrm = _norm(arr, self.mode)
        if np.any(nrm == 0):
            raise InputError("cannot normalize the zero vector")
        return arr / np.asarray(nrm)[..., None]


def _norm(arr: np.ndarray, mode: NormMode):
    out = np.linalg.norm(arr, ord=_ORD[mode], axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def norm_eval(v, ns: NormSpec) -> float:
    """||v|| in the scene norm."""
    return ns.norm(v)


def dual_norm_eval(f, ns: NormSpec) -> float:
    """||f||_* = sup_{||x|| <= 1} |<f, x>|, i.e. the norm of the dual family."""
    return ns.dual_norm(f)


def project_onto_cone(c, generators, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Euclidean projection of ``c`` onto ``cone(generators)``.

    ``generators`` holds one generator per row.  The coefficients come from
    Lawson-Hanson NNLS; the result is accepted only if the KKT system
    (dual feasibility and complementarity) holds to ``eps_mem`` relative to
    the data scale.
    """
    G = np.atleast_2d(np.asarray(generators, dtype=float))
    c = np.asarray(c, dtype=float)
    if G.shape[1] != c.shape[-1]:
        raise InputError("dimension mismatch between point and generators")
    lam, _ = _nnls(G.T, c, tol)
    return G.T @ lam


def _kkt_ok(M: np.ndarray, b: np.ndarray, lam: np.ndarray, tol: Tolerances) -> bool:
    grad = M.T @ (b - M @ lam)  # must be <= 0 everywhere, = 0 on the support
    scale = 1e3 * tol.eps_mem * max(1.0, float(np.linalg.norm(b))) * max(1.0, float(np.abs(M).max()))
    return grad.max(initial=0.0) <= scale and abs(lam @ grad) <= scale


def _nnls(M: np.ndarray, b: np.ndarray, tol: Tolerances):
    """min ||M lam - b||, lam >= 0, with a KKT check.

    scipy's active-set nnls occasionally stops at a non-optimal point, so a
    failed check falls back to the bounded-variable solver.
    """
    try:
        lam, rnorm = nnls(M, b, maxiter=max(3 * M.shape[1], tol.max_iter))
    except RuntimeError:  # scipy raises on iteration cap
        lam = None
    if lam is None or not _kkt_ok(M, b, lam, tol):
        lam = lsq_linear(M, b, bounds=(0.0, np.inf), method="bvls", tol=1e-14).x
        lam = np.maximum(lam, 0.0)
        if not _kkt_ok(M, b, lam, tol):
            raise NumericalFailure("projection onto cone failed its optimality check")
        rnorm = float(np.linalg.norm(M @ lam - b))
    return lam, rnorm


def cone_residual(x, generators, tol: Tolerances = DEFAULT_TOL) -> float:
    """Euclidean distance from ``x`` to ``cone(generators)``."""
    G = np.atleast_2d(np.asarray(generators, dtype=float))
    x = np.asarray(x, dtype=float)
    _, res = _nnls(G.T, x, tol)
    return float(res)


def in_cone(x, generators, tol: Tolerances = DEFAULT_TOL) -> bool:
    x = np.asarray(x, dtype=float)
    return cone_residual(x, generators, tol) <= tol.eps_mem * max(1.0, float(np.linalg.norm(x)))


def lp_feasible(A_eq: np.ndarray, b_eq: np.ndarray, n_vars: int, tol: Tolerances = DEFAULT_TOL):
    """Find z >= 0 with A_eq z = b_eq.  Returns the solution or ``None``.

    Feasibility is decided by the phase-one residual: minimise the l1
    violation with slack variables, so that near-feasibility is judged by
    our own tolerance rather than the solver's status flag alone.
    """
    A_eq = np.atleast_2d(np.asarray(A_eq, dtype=float))
    b_eq = np.asarray(b_eq, dtype=float)
    k = A_eq.shape[0]
    # z, s_plus, s_minus >= 0 ; A z + s+ - s- = b ; minimise sum(s)
    A = np.hstack([A_eq, np.eye(k), -np.eye(k)])
    cost = np.concatenate([np.zeros(n_vars), np.ones(2 * k)])
    res = linprog(cost, A_eq=A, b_eq=b_eq, bounds=(0, None), method="highs")
    if res.status != 0:
        raise NumericalFailure(f"LP solver failed: {res.message}")
    z = res.x[:n_vars]
    violation = float(np.abs(A_eq @ z - b_eq).sum())
    if violation <= tol.eps_mem * max(1.0, float(np.abs(b_eq).max(initial=0.0))):
        return z
    return None
