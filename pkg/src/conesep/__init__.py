"""Strict separation of (possibly nonconvex) cones by Bishop-Phelps cones.

The main entry point is :func:`strict_bp_separation`, which either returns
a certificate (x*, alpha) whose normlinear function
phi(x) = <x*, x> + alpha ||x|| is positive on A \\ {0} and negative on
-K \\ {0}, or a point common to the hulls cl S_A^0 and cl S_{-K} showing
that no such certificate exists.
"""
__version__ = "0.1.0"

from .augmented_dual import (  # noqa: E402
    AugClassification,
    AugPair,
    classify_aug_pair,
    construct_positive_pair,
    find_positive_pair,
)
from .base_oracle import boundary_base_sample, mu_base, sample_base, sigma_base, zero_in_cl_S  # noqa: E402
from .bp_cone import BPCone, Membership, bp_classify, bp_from_functional, bp_properties, phi_eval  # noqa: E402
from .cones import (  # noqa: E402
    ConeUnion,
    FinGenCone,
    cones_intersect_trivially,
    conv_hull_cone,
    dual_cone_membership,
    is_pointed,
    make_union,
    sharp_membership,
    validate_cone,
)
from .geometry import NormMode, NormSpec, Tolerances, dual_norm_eval, norm_eval, project_onto_cone  # noqa: E402
from .separation import (  # noqa: E402
    SeparationCertificate,
    SeparationVerdict,
    alpha_interval_of,
    check_necessary_conditions,
    separate_cone_hyperplane,
    separate_convex_bodies,
    strict_bp_separation,
    verify_boundary_separation,
    verify_strict_separation,
)
