"""Acceptance criteria, each run at its stated tolerance.

Every test records one PASS/FAIL line, printed in the ``acceptance
criteria`` section of the pytest terminal summary.
"""
import numpy as np
import pytest

from conesep import (
    AugPair,
    NormSpec,
    check_necessary_conditions,
    classify_aug_pair,
    conv_hull_cone,
    find_positive_pair,
    make_union,
    mu_base,
    sample_base,
    separate_cone_hyperplane,
    strict_bp_separation,
    verify_strict_separation,
    zero_in_cl_S,
)
from conesep.bp_cone import BPCone, bishop_phelps_functional, in_bishop_phelps
from conesep.errors import NoPositivePair
from conesep.geometry import DEFAULT_TOL
from conesep.oracle import OracleConfig, oracle_cor_test, oracle_mu
from conesep.separation import ObstructionReason, Touching

from helpers import base_point_ok, in_hull_lp, random_cone, random_scene

TOL = DEFAULT_TOL


def l1_counterexample():
    ns = NormSpec("l1", 2)
    x = lambda lam: [1 - lam, lam]  # noqa: E731
    A = make_union([[x(0.0), x(0.2)], [x(0.8), x(1.0)]], ns)
    K = make_union([[[-v for v in x(0.4)], [-v for v in x(0.6)]]], ns)
    return ns, K, A


# hull vertices of the l1 counterexample: on the positive orthant the l1 norm
# is linear, so each piece's base is the segment between its normalised generators
CEX_SA0 = np.array([[0, 0], [1, 0], [0.8, 0.2], [0.2, 0.8], [0, 1]], float)
CEX_SNEGK = np.array([[0.6, 0.4], [0.4, 0.6]], float)


def test_criterion_1_l1_counterexample(criterion):
    ns, K, A = l1_counterexample()
    rep = check_necessary_conditions(K, A)
    verdict = strict_bp_separation(K, A)
    ok = rep.a_meets_conv_negK_trivially and not rep.zero_in_cl_S_negK and not verdict.separated
    obs = verdict.obstruction
    ok = ok and obs is not None and obs.reason == ObstructionReason.HULLS_INTERSECT
    w = obs.witness_point
    r1, r2 = in_hull_lp(CEX_SA0, w), in_hull_lp(CEX_SNEGK, w)
    ok = ok and r1 <= 1e-9 and r2 <= 1e-9
    criterion("criterion 1: l1 counterexample not separated", ok,
              f"witness={np.round(w, 12).tolist()} lp_residuals=({r1:.1e}, {r2:.1e})")
    assert ok


def test_criterion_2_hull_witness_value(criterion):
    p = np.array([0.5, 0.5])
    r1, r2 = in_hull_lp(CEX_SA0, p), in_hull_lp(CEX_SNEGK, p)
    ok = r1 <= 1e-12 and r2 <= 1e-12
    criterion("criterion 2: (0.5, 0.5) in both hulls", ok, f"lp_residuals=({r1:.1e}, {r2:.1e})")
    assert ok


def _touching_ok(K, A, obs) -> bool:
    """Independent recheck that the obstruction exhibits a common point of the hulls."""
    negK = K.negate()
    if obs.reason == ObstructionReason.ZERO_IN_CL_S:
        return in_hull_lp(negK.all_generators, np.zeros(K.dim)) <= 1e-9
    c = obs.contact
    if not isinstance(c, Touching):
        return False
    w = c.weights
    if np.any(w < 0) or abs(w.sum() - 1) > 1e-9:
        return False
    if not all(base_point_ok(negK, p) for p in c.p_atoms):
        return False
    if not all(np.linalg.norm(q) <= 1e-12 or base_point_ok(A, q) for q in c.q_atoms):
        return False
    return np.linalg.norm(c.p_atoms.T @ w - c.q_atoms.T @ w) <= 1e-6


def _sweep():
    rng = np.random.default_rng(20240531)
    scenes = [random_scene(rng, 2) for _ in range(200)] + [random_scene(rng, 3) for _ in range(50)]
    out = []
    for ns, K, A in scenes:
        out.append((K, A, strict_bp_separation(K, A)))
    return out


@pytest.fixture(scope="module")
def sweep():
    return _sweep()


def test_criterion_3_equivalence_sweep(sweep, criterion):
    bad = []
    n_sep = 0
    for i, (K, A, v) in enumerate(sweep):
        if v.separated:
            n_sep += 1
            cert = v.certificate
            dist = cert.hull_distance
            res = verify_strict_separation(K, A, cert.pair, 10_000, seed=i)
            cls = classify_aug_pair(K, cert.pair)
            good = (dist > 1e-6 and res.ok and res.min_margin_A >= TOL.eps_sep
                    and res.max_margin_K <= -TOL.eps_sep and cls.in_aw_sharp and cert.alpha > 0)
        else:
            dist = v.obstruction.hull_distance
            good = dist <= 1e-6 and _touching_ok(K, A, v.obstruction)
        if not good:
            bad.append(i)
    ok = not bad
    criterion("criterion 3: hull distance > 1e-6 <=> certificate", ok,
              f"scenes={len(sweep)} separated={n_sep} failures={bad}")
    assert ok
    assert 0 < n_sep < len(sweep)  # both outcomes exercised


def test_criterion_4_form_agreement(sweep, criterion):
    total, checked = 0, 0
    for i, (K, A, v) in enumerate(sweep):
        if not v.separated:
            continue
        res = verify_strict_separation(K, A, v.certificate.pair, 10_000, seed=i)
        total += res.disagreements
        checked += 1
    ok = total == 0 and checked > 0
    criterion("criterion 4: sample check = base check", ok, f"certificates={checked} disagreements={total}")
    assert ok


def _cor_instance(rng, dim):
    K = random_cone(rng, dim)
    if rng.random() < 0.5:
        try:
            xs = find_positive_pair(K).xstar + 0.1 * rng.normal(size=dim)
        except NoPositivePair:
            xs = rng.normal(size=dim)
    else:
        xs = rng.normal(size=dim)
    mu = mu_base(K, xs).value
    if mu <= 0:
        alpha = rng.uniform(0, 1)
    else:
        # keep clear of the boundary alpha = mu, where the grid cannot decide
        while True:
            alpha = rng.uniform(0, 1.5) * mu
            if abs(alpha - mu) > 0.05 * mu:
                break
    if rng.random() < 0.1:
        alpha = 0.0
    return K, AugPair(xs, alpha)


def test_criterion_5_augmented_dual(criterion):
    rng = np.random.default_rng(5)
    cfg = OracleConfig(grid_count=20_000, grid_count_3d=50_000, edge_count=500)
    cor_bad, pos_bad, n_cor, n_nonpointed = [], [], 0, 0
    for dim in (2, 3):
        for i in range(100):
            K, p = _cor_instance(rng, dim)
            exact = classify_aug_pair(K, p).in_cor_a_plus
            n_cor += exact
            if exact != oracle_cor_test(K, p, cfg):
                cor_bad.append((dim, i))
            z = zero_in_cl_S(K)
            n_nonpointed += z
            try:
                pair = find_positive_pair(K)
                found = pair.alpha > 0 and classify_aug_pair(K, pair).in_a_plus
            except NoPositivePair:
                found = False
            if (not z) != found:
                pos_bad.append((dim, i))
    ok = not cor_bad and not pos_bad
    criterion("criterion 5: cor test and positive pair characterisation", ok,
              f"instances=200 cor_true={n_cor} zero_in_clS={n_nonpointed} "
              f"cor_mismatch={cor_bad} pair_mismatch={pos_bad}")
    assert ok


def test_criterion_6_alpha_interval(criterion):
    ns = NormSpec("l2", 2)
    K = make_union([[[-1, 0], [0, -1]]], ns)
    A = make_union([[[-1, 2]], [[2, -1]]], ns)
    cert = strict_bp_separation(K, A).certificate
    lo, hi = cert.alpha_interval
    ok = abs(lo - 1 / np.sqrt(5)) <= 1e-6 and abs(hi - 1.0) <= 1e-6
    convK = conv_hull_cone(K)
    alphas = lo + (hi - lo) * (np.arange(1, 11) / 11.0)
    n_ok = 0
    for a in alphas:
        pair = AugPair(cert.xstar, a)
        n_ok += verify_strict_separation(convK, A, pair, 10_000).ok and classify_aug_pair(convK, pair).in_a_sharp
    ok = ok and n_ok == 10
    criterion("criterion 6: two-ray alpha interval (1/sqrt5, 1)", ok,
              f"interval=({lo:.9f}, {hi:.9f}) interior_alphas_ok={n_ok}/10")
    assert ok


def test_criterion_7_bishop_phelps_identity(criterion):
    rng = np.random.default_rng(7)
    bad = 0
    for k in range(20):
        ns = NormSpec(("l1", "l2", "linf")[k % 3], 2 + k % 3)
        xs = rng.normal(size=ns.dim)
        alpha = rng.uniform(0.05, 0.95) * float(ns.dual_norm(xs))
        C = BPCone(xs, alpha, ns)
        X = rng.normal(size=(100_000, ns.dim)) * rng.uniform(0.01, 10, size=(100_000, 1))
        phi = C.phi(X)
        in_c = phi <= 0
        in_bp = in_bishop_phelps(bishop_phelps_functional(C), X, ns)
        band = np.abs(phi) <= TOL.eps_mem * np.maximum(1.0, ns.norm(X))
        bad += int(np.sum((in_c != in_bp) & ~band))
    ok = bad == 0
    criterion("criterion 7: C<=(x*, alpha) = C(-x*/alpha)", ok, f"pairs=20 points=1e5 disagreements={bad}")
    assert ok


def test_criterion_8_mu_oracle(criterion):
    ns2 = NormSpec("l2", 2)
    R2 = make_union([[[1, 0], [0, 1]]], ns2)
    a1, a2 = mu_base(R2, [1, 1]).value, mu_base(R2, [-1, -1]).value
    anchors = abs(a1 - 1) <= 1e-9 and abs(a2 + np.sqrt(2)) <= 1e-9
    rng = np.random.default_rng(8)
    worst = 0.0
    for i in range(100):
        ns = NormSpec(("l1", "l2", "linf")[i % 3], 2)
        K = random_cone(rng, 2, ns)
        c = rng.normal(size=2)
        worst = max(worst, abs(mu_base(K, c).value - oracle_mu(K, c)))
    ok = anchors and worst <= 5e-3
    criterion("criterion 8: mu_base vs grid oracle", ok,
              f"anchors=({a1:.12f}, {a2:.12f}) max_gap={worst:.2e}")
    assert ok


def _separable_pair(rng, dim):
    ns = NormSpec(("l1", "l2", "linf")[rng.integers(3)], dim)
    u = rng.normal(size=dim)
    u /= np.linalg.norm(u)

    def rays(m):
        out = []
        while len(out) < m:
            v = rng.normal(size=dim)
            v /= np.linalg.norm(v)
            if v @ u > 0.05:
                out.append(v.tolist())
        return out

    A = make_union([rays(int(rng.integers(1, dim + 3)))], ns)
    K = make_union([rays(int(rng.integers(1, dim + 3)))], ns)
    return A, K


def test_criterion_9_linear_cone_separation(criterion):
    rng = np.random.default_rng(9)
    bad = []
    for i in range(100):
        A, K = _separable_pair(rng, 2 if i < 50 else 3)
        xs = separate_cone_hyperplane(A, K)
        if xs is None:
            bad.append(i)
            continue
        a_pts = np.vstack([A.all_generators, sample_base(A, 10_000, i)])
        k_pts = -np.vstack([K.all_generators, sample_base(K, 10_000, i + 1)])
        if np.min(a_pts @ xs) < -TOL.eps_mem or np.max(k_pts @ xs) >= 0:
            bad.append(i)
    ok = not bad
    criterion("criterion 9: linear cone separation", ok, f"pairs=100 failures={bad}")
    assert ok
