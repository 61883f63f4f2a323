"""Strict separation of -K and A by Bishop-Phelps cones.

The solver reduces the cone problem to the distance between two compact
convex sets, cl S_A^0 = conv({0} cup B_A) and cl S_{-K} = conv(B_{-K}).
If they are disjoint, a linear separator x* with

    x*(a) >= beta > gamma >= x*(k)   on cl S_A^0 and cl S_{-K}

turns into the pair (x*, alpha), alpha = -(beta + gamma) / 2, whose
normlinear function phi = <x*, .> + alpha ||.|| is positive on A \\ {0}
and negative on -K \\ {0}.  If they intersect, no such pair exists and the
common point is returned as the obstruction.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .augmented_dual import AugClassification, AugPair, classify_aug_pair
from .base_oracle import boundary_base_sample, mu_base, sample_base, sigma_base, zero_in_cl_S
from .cones import Cone, ConeUnion, as_union, cones_intersect_trivially, conv_hull_cone, is_pointed
from .errors import InputError, NumericalFailure, ZeroInBase
from .geometry import DEFAULT_TOL, Tolerances, project_onto_cone

log = logging.getLogger(__name__)

Support = Callable[[np.ndarray], tuple[float, np.ndarray]]


# ---------------------------------------------------------------------------
# closest pair of two compact convex sets

@dataclass
class BodySeparation:
    """sup_P <x*, .> < inf_Q <x*, .> with x* = q - p for the closest pair (p, q)."""

    xstar: np.ndarray
    sup_p: float
    inf_q: float
    distance: float
    p_point: np.ndarray
    q_point: np.ndarray
    iterations: int
    gap: float


@dataclass
class Touching:
    """The sets intersect, or come closer than eps_sep.

    ``p_atoms``/``q_atoms`` with ``weights`` express ``p_point`` and
    ``q_point`` as convex combinations of points returned by the oracles,
    so membership of the witness can be rechecked independently.
    """

    witness: np.ndarray
    distance: float
    p_point: np.ndarray
    q_point: np.ndarray
    p_atoms: np.ndarray
    q_atoms: np.ndarray
    weights: np.ndarray
    iterations: int


def with_origin(support: Support) -> Support:
    """Support oracle of conv({0} cup S) from that of S."""

    def sup(d):
        v, x = support(d)
        if v < 0:
            return 0.0, np.zeros_like(x)
        return v, x

    return sup


def base_support(K: Cone, tol: Tolerances = DEFAULT_TOL) -> Support:
    """Support oracle of cl S_K = conv(B_K)."""

    def sup(d):
        r = sigma_base(K, d, tol)
        return r.value, r.argpoint

    return sup


def _affine_minimizer(Z: np.ndarray) -> np.ndarray:
    """Weights v with sum 1 minimising |Z^T v| (affine hull min-norm point)."""
    if len(Z) == 1:
        return np.ones(1)
    D = (Z[1:] - Z[0]).T
    c, *_ = np.linalg.lstsq(D, -Z[0], rcond=None)
    return np.concatenate([[1.0 - c.sum()], c])


def separate_convex_bodies(
    p_support: Support,
    q_support: Support,
    dim: int,
    p_contains_zero: bool = False,
    q_contains_zero: bool = False,
    tol: Tolerances = DEFAULT_TOL,
) -> BodySeparation | Touching:
    """Closest pair between compact convex sets P and Q given by support oracles.

    Runs Wolfe's min-norm-point method on the difference body Q - P: each
    major step pulls one extreme point from every oracle (a conditional
    gradient step), then the weights over the collected pairs are fully
    re-optimised on the simplex.  Stops when the duality gap drops below
    eps_sep**2 or the iterate norm falls below eps_mem.
    """
    if p_contains_zero:
        p_support = with_origin(p_support)
    if q_contains_zero:
        q_support = with_origin(q_support)

    def lmo(x):
        _, p = p_support(x)
        _, q = q_support(-x)
        return p, q

    # seed with extreme points along the line between rough centres
    E = np.vstack([np.eye(dim), -np.eye(dim)])
    d = np.mean([q_support(e)[1] for e in E], axis=0) - np.mean([p_support(e)[1] for e in E], axis=0)
    if np.linalg.norm(d) < 1e-12:
        d = E[0]
    _, p0 = p_support(d)
    _, q0 = q_support(-d)
    P_at, Q_at = [np.asarray(p0, float)], [np.asarray(q0, float)]
    w = np.ones(1)
    x = Q_at[0] - P_at[0]
    gap_tol = tol.eps_sep ** 2
    gap = np.inf
    it = 0
    for it in range(1, tol.max_iter + 1):
        if float(x @ x) <= tol.eps_mem ** 2:
            break
        p, q = lmo(x)
        s = q - p
        gap = float(x @ x - x @ s)
        if gap <= gap_tol:
            break
        Z = np.array(Q_at) - np.array(P_at)
        if np.any(np.linalg.norm(Z - s, axis=1) <= 1e-15):
            break  # no new atom: numerical stall at optimum
        P_at.append(p)
        Q_at.append(q)
        w = np.append(w, 0.0)
        for _ in range(len(w) + 2):
            Z = np.array(Q_at) - np.array(P_at)
            v = _affine_minimizer(Z)
            if np.all(v > 1e-14):
                w = v
                break
            neg = v <= 1e-14
            theta = np.min(w[neg] / np.maximum(w[neg] - v[neg], 1e-300))
            theta = min(max(theta, 0.0), 1.0)
            w = (1 - theta) * w + theta * v
            keep = w > 1e-14
            keep[np.argmax(w)] = True
            P_at = [a for a, k in zip(P_at, keep) if k]
            Q_at = [a for a, k in zip(Q_at, keep) if k]
            w = w[keep] / w[keep].sum()
        x_new = (np.array(Q_at) - np.array(P_at)).T @ w
        stalled = float(x_new @ x_new) >= float(x @ x) * (1 - 1e-15)
        x = x_new
        if stalled:
            break
    else:
        raise NumericalFailure(f"closest-pair iteration cap reached (best gap {gap:.3g})")

    p_pt = np.array(P_at).T @ w
    q_pt = np.array(Q_at).T @ w
    dist = float(np.linalg.norm(x))
    if dist <= tol.eps_sep:
        return Touching(
            witness=0.5 * (p_pt + q_pt), distance=dist, p_point=p_pt, q_point=q_pt,
            p_atoms=np.array(P_at), q_atoms=np.array(Q_at), weights=w, iterations=it,
        )
    sup_p, _ = p_support(x)
    neg_inf_q, _ = q_support(-x)
    inf_q = -neg_inf_q
    if not inf_q > sup_p:
        raise NumericalFailure("closest-pair direction does not separate the sets")
    return BodySeparation(x, float(sup_p), float(inf_q), dist, p_pt, q_pt, it, max(gap, 0.0))


# ---------------------------------------------------------------------------
# Bishop-Phelps strict separation of -K and A

class ObstructionReason(str, enum.Enum):
    HULLS_INTERSECT = "HullsIntersect"
    ZERO_IN_CL_S = "ZeroInClS"
    TRIVIAL_CONE = "TrivialCone"


@dataclass
class Obstruction:
    witness_point: np.ndarray
    reason: ObstructionReason
    hull_distance: float = 0.0
    note: str = ""
    contact: Optional[Touching] = None


@dataclass
class SeparationCertificate:
    xstar: np.ndarray
    alpha: float
    beta: float  # min of x* over cl S_A^0
    gamma: float  # max of x* over cl S_{-K}
    hull_distance: float
    alpha_interval: Optional[tuple[float, float]]
    aug_class: AugClassification
    notes: list[str] = field(default_factory=list)

    @property
    def pair(self) -> AugPair:
        return AugPair(self.xstar, self.alpha)


@dataclass
class SeparationVerdict:
    separated: bool
    certificate: Optional[SeparationCertificate] = None
    obstruction: Optional[Obstruction] = None


def hull_distance(K: Cone, A: Cone, tol: Tolerances = DEFAULT_TOL) -> BodySeparation | Touching:
    """Closest pair between cl S_{-K} (first) and cl S_A^0 (second)."""
    negK = as_union(K).negate()
    return separate_convex_bodies(
        base_support(negK, tol), base_support(A, tol), as_union(K).dim, q_contains_zero=True, tol=tol
    )


def strict_bp_separation(K: Cone, A: Cone, tol: Tolerances = DEFAULT_TOL) -> SeparationVerdict:
    """Decide whether -K and A are strictly separated by some C<=_{x*, alpha}, alpha > 0.

    The returned x* is scaled so that min over B_K of x* equals 1, which
    makes the admissible alpha-interval (delta1, 1).
    """
    K, A = as_union(K), as_union(A)
    if K.ns != A.ns:
        raise InputError("K and A must live in the same normed space")
    dim = K.dim
    if zero_in_cl_S(K.negate(), tol):
        return SeparationVerdict(False, obstruction=Obstruction(
            np.zeros(dim), ObstructionReason.ZERO_IN_CL_S,
            note="0 lies in cl S_{-K} and in cl S_A^0",
        ))
    res = hull_distance(K, A, tol)
    if isinstance(res, Touching):
        note = "hulls intersect"
        if res.distance > tol.eps_mem:
            note = f"LowMargin: hull distance {res.distance:.3g} does not exceed eps_sep"
        return SeparationVerdict(False, obstruction=Obstruction(
            res.witness, ObstructionReason.HULLS_INTERSECT, res.distance, note, res,
        ))

    interval = alpha_interval_of(K, A, res.xstar, tol)
    scale = mu_base(K, res.xstar, tol).value
    if not scale > 0:
        raise NumericalFailure("separating functional is not positive on K")
    xstar = res.xstar / scale
    gamma, beta = res.sup_p / scale, res.inf_q / scale
    alpha = -(beta + gamma) / 2.0
    if interval is not None:
        interval = (interval[0] / scale, interval[1] / scale)
    notes = []
    if alpha <= tol.eps_sep:
        raise NumericalFailure("separation margin too small to produce alpha > 0")
    cls = classify_aug_pair(K, AugPair(xstar, alpha), tol)
    if not (cls.in_aw_sharp and alpha > 0):
        raise NumericalFailure("constructed pair failed the augmented dual test")
    if beta > -tol.eps_sep:
        notes.append("x* is nonnegative on A: a halfspace certificate (alpha = 0) also separates")
    cert = SeparationCertificate(xstar, float(alpha), float(beta), float(gamma), res.distance, interval, cls, notes)
    return SeparationVerdict(True, certificate=cert)


def alpha_interval_of(K: Cone, A: Cone, xstar, tol: Tolerances = DEFAULT_TOL) -> Optional[tuple[float, float]]:
    """Open interval (delta1, delta2) of alpha values that separate -cl conv K and A.

    delta2 = min of x* over the base of cl conv K; delta1 = max(0, -min of x*
    over B_A), raised by eps_sep.  ``None`` when the interval is empty.
    """
    xstar = np.asarray(xstar, dtype=float)
    if not np.any(xstar):
        return None
    d2 = mu_base(conv_hull_cone(K, tol), xstar, tol).value
    d1 = max(0.0, -mu_base(A, xstar, tol).value) + tol.eps_sep
    if d2 > d1 > 0:
        return (float(d1), float(d2))
    return None


# ---------------------------------------------------------------------------
# verification

@dataclass
class VerificationResult:
    ok: bool
    min_margin_A: float
    max_margin_K: float
    form_agreement: bool
    disagreements: int
    samples: int


def _verify(ns, xstar, alpha, A_pts, negK_pts, tol) -> VerificationResult:
    xstar = ns.check(xstar)
    phi_a = A_pts @ xstar + alpha * ns.norm(A_pts)
    phi_k = negK_pts @ xstar + alpha * ns.norm(negK_pts)
    ok_a, ok_k = phi_a > tol.eps_sep, phi_k < -tol.eps_sep
    # base form: x*(a) > -alpha > x*(k) on unit vectors
    lin_a = A_pts @ xstar + alpha > tol.eps_sep
    lin_k = negK_pts @ xstar + alpha < -tol.eps_sep
    dis = int(np.sum(ok_a != lin_a) + np.sum(ok_k != lin_k))
    ok = bool(np.all(ok_a) and np.all(ok_k))
    return VerificationResult(
        ok=ok,
        min_margin_A=float(phi_a.min()) if len(phi_a) else np.inf,
        max_margin_K=float(phi_k.max()) if len(phi_k) else -np.inf,
        form_agreement=dis == 0,
        disagreements=dis,
        samples=len(A_pts) + len(negK_pts),
    )


def verify_strict_separation(K: Cone, A: Cone, cert, sample_count: int = 10_000, seed: int = 0,
                             tol: Tolerances = DEFAULT_TOL) -> VerificationResult:
    """Check phi > 0 on sampled B_A and phi < 0 on sampled B_{-K}.

    ``cert`` is anything with ``xstar`` and ``alpha`` attributes.  Samples
    always include every normalised generator.
    """
    K, A = as_union(K), as_union(A)
    A_pts = sample_base(A, sample_count, seed)
    negK_pts = -sample_base(K, sample_count, seed + 1)
    return _verify(K.ns, cert.xstar, cert.alpha, A_pts, negK_pts, tol)


def verify_boundary_separation(K: Cone, A: Cone, cert, sample_count: int = 10_000, seed: int = 0,
                               tol: Tolerances = DEFAULT_TOL) -> VerificationResult:
    """As verify_strict_separation, with A replaced by samples of its boundary."""
    K, A = as_union(K), as_union(A)
    A_pts = boundary_base_sample(A, sample_count, seed, tol)
    negK_pts = -sample_base(K, sample_count, seed + 1)
    return _verify(K.ns, cert.xstar, cert.alpha, A_pts, negK_pts, tol)


# ---------------------------------------------------------------------------
# linear cone separation and necessary conditions

def _truncated_cone_support(A: Cone, radius: float, tol: Tolerances) -> Support:
    """Support of cone(conv A) cap (radius * Euclidean ball), via Moreau's decomposition."""
    G = as_union(A).all_generators

    def sup(d):
        proj = project_onto_cone(d, G, tol)
        nrm = float(np.linalg.norm(proj))
        if nrm <= 1e-15:
            return 0.0, np.zeros_like(proj)
        return radius * nrm, radius * proj / nrm

    return sup


def separate_cone_hyperplane(A: Cone, K: Cone, tol: Tolerances = DEFAULT_TOL) -> Optional[np.ndarray]:
    """x* with x*(a) >= 0 on A and x*(k) < 0 on -K \\ {0}, or None.

    The closed convex cone conv A is separated from the compact set
    cl S_{-K}.  The cone is truncated to a Euclidean ball containing
    cl S_{-K}; the projection onto the cone of any point of the ball stays
    inside it, so the closest pair is the same as for the whole cone and
    the min-norm direction is nonpositive on conv A.
    """
    K, A = as_union(K), as_union(A)
    if zero_in_cl_S(K, tol):
        raise ZeroInBase("0 lies in cl S_K; linear cone separation is impossible")
    negK = K.negate()
    radius = 2.0 * np.sqrt(K.dim)  # unit vectors of l1, l2, l-inf have Euclidean norm <= sqrt(n)
    res = separate_convex_bodies(
        _truncated_cone_support(A, radius, tol), base_support(negK, tol), K.dim, tol=tol
    )
    if isinstance(res, Touching):
        return None
    xstar = -res.xstar  # nonnegative on A, negative on cl S_{-K}
    xstar = xstar / float(np.max(np.abs(xstar)))
    if np.min(as_union(A).all_generators @ xstar) < -tol.eps_mem:
        raise NumericalFailure("linear separator violates the A-side inequality")
    if sigma_base(negK, xstar, tol).value >= -tol.eps_sep:
        raise NumericalFailure("linear separator violates the K-side inequality")
    return xstar


@dataclass
class AnalysisReport:
    a_meets_conv_negK_trivially: bool  # A cap cl conv(-K) = {0}
    zero_in_cl_S_negK: bool
    zero_in_cl_S_A: bool
    conv_K_pointed: bool
    conv_A_pointed: bool
    necessary_conditions: bool
    hulls_disjoint: bool
    hull_distance: float
    a_convex: bool
    convex_a_equivalence: Optional[bool]  # None when A is not a single convex piece


def check_necessary_conditions(K: Cone, A: Cone, tol: Tolerances = DEFAULT_TOL) -> AnalysisReport:
    """Evaluate A cap cl conv(-K) = {0} and 0 not in cl S_{-K} next to hull disjointness.

    The two conditions are necessary for strict separation.  For a single
    convex piece A they are also sufficient, and ``convex_a_equivalence``
    records whether the computed booleans agree with that.
    """
    K, A = as_union(K), as_union(A)
    negK = K.negate()
    trivial = cones_intersect_trivially(A, conv_hull_cone(negK, tol), tol)
    z_negK = zero_in_cl_S(negK, tol)
    necessary = trivial and not z_negK
    if z_negK:
        disjoint, dist = False, 0.0
    else:
        res = hull_distance(K, A, tol)
        disjoint, dist = isinstance(res, BodySeparation), res.distance
    a_convex = len(A.pieces) == 1
    return AnalysisReport(
        a_meets_conv_negK_trivially=bool(trivial),
        zero_in_cl_S_negK=bool(z_negK),
        zero_in_cl_S_A=bool(zero_in_cl_S(A, tol)),
        conv_K_pointed=is_pointed(conv_hull_cone(K, tol), tol).pointed,
        conv_A_pointed=is_pointed(conv_hull_cone(A, tol), tol).pointed,
        necessary_conditions=bool(necessary),
        hulls_disjoint=bool(disjoint),
        hull_distance=float(dist),
        a_convex=a_convex,
        convex_a_equivalence=(necessary == disjoint) if a_convex else None,
    )
