"""conesep command line: ``conesep <task> --scene FILE [--out FILE] [--samples N] [--seed S]``.

Exit codes: 0 success, 2 invalid input, 3 separation requested but not
achieved (or certificate rejected), 4 numerical failure or oracle
disagreement.
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .augmented_dual import classify_aug_pair, find_positive_pair
from .base_oracle import mu_base
from .cones import is_pointed
from .errors import ConeSepError, InputError, NoPositivePair, NumericalFailure, UnsupportedScale
from .oracle import OracleConfig, oracle_cor_test, oracle_mu, oracle_separation
from .plot import export_plot
from .scene import TASKS, Report, Scene, jsonable, load_scene
from .separation import (
    alpha_interval_of,
    check_necessary_conditions,
    strict_bp_separation,
    verify_boundary_separation,
    verify_strict_separation,
)

log = logging.getLogger("conesep")

EXIT_OK, EXIT_INPUT, EXIT_NOT_SEPARATED, EXIT_NUMERICAL = 0, 2, 3, 4


def _verdict_dict(verdict) -> dict:
    out = jsonable(verdict)
    obs = out.get("obstruction")
    if obs and obs.get("contact"):
        c = obs["contact"]
        obs["contact"] = {k: c[k] for k in ("p_point", "q_point", "p_atoms", "q_atoms", "weights")}
    return out


def _analyze(sc: Scene) -> tuple[dict, int]:
    res = {"analysis": jsonable(check_necessary_conditions(sc.K, sc.A, sc.tol))}
    res["K_pieces_pointed"] = [is_pointed(p, sc.tol).pointed for p in sc.K.pieces]
    try:
        pair = find_positive_pair(sc.K, sc.tol)
        res["positive_pair"] = {
            "xstar": pair.xstar.tolist(), "alpha": pair.alpha,
            "classification": jsonable(classify_aug_pair(sc.K, pair, sc.tol)),
        }
    except NoPositivePair as exc:
        res["positive_pair"] = {"error": str(exc)}
    return res, EXIT_OK


def _verifications(sc: Scene, cert, samples: int) -> dict:
    out = {"strict": jsonable(verify_strict_separation(sc.K, sc.A, cert, samples, sc.seed, sc.tol))}
    if sc.ns.dim <= 3:
        out["boundary"] = jsonable(verify_boundary_separation(sc.K, sc.A, cert, samples, sc.seed, sc.tol))
    return out


def _separate(sc: Scene, samples: int) -> tuple[dict, int]:
    verdict = strict_bp_separation(sc.K, sc.A, sc.tol)
    res = {"verdict": _verdict_dict(verdict)}
    if not verdict.separated:
        return res, EXIT_NOT_SEPARATED
    res["verification"] = _verifications(sc, verdict.certificate, samples)
    if not res["verification"]["strict"]["ok"]:
        raise NumericalFailure("solver certificate failed sampled verification")
    return res, EXIT_OK


def _certify(sc: Scene, samples: int) -> tuple[dict, int]:
    cert = sc.certificate
    cls = classify_aug_pair(sc.K, cert, sc.tol)
    res = {
        "classification": jsonable(cls),
        "verification": _verifications(sc, cert, samples),
        "alpha_interval": jsonable(alpha_interval_of(sc.K, sc.A, cert.xstar, sc.tol)),
    }
    ok = res["verification"]["strict"]["ok"] and cls.in_aw_sharp
    res["certified"] = bool(ok)
    if cert.alpha == 0 and ok:
        res["note"] = "alpha = 0: the separating cone is a halfspace, not a Bishop-Phelps cone"
    return res, EXIT_OK if ok else EXIT_NOT_SEPARATED


def _oracle_check(sc: Scene, samples: int) -> tuple[dict, int]:
    cfg = OracleConfig(seed=sc.seed)
    rng = np.random.default_rng(sc.seed)
    checks = []
    for cone_name, cone in (("K", sc.K), ("A", sc.A)):
        for c in rng.normal(size=(5, sc.ns.dim)):
            exact = mu_base(cone, c, sc.tol).value
            grid = oracle_mu(cone, c, cfg)
            checks.append({"check": f"mu_{cone_name}", "c": c, "exact": exact, "oracle": grid,
                           "agree": bool(exact - 1e-9 <= grid <= exact + 2e-2)})
    verdict = strict_bp_separation(sc.K, sc.A, sc.tol)
    cert = verdict.certificate if verdict.separated else sc.certificate
    if cert is not None:
        exact_ok = verify_strict_separation(sc.K, sc.A, cert, samples, sc.seed, sc.tol).ok
        grid_ok = oracle_separation(sc.K, sc.A, cert, cfg, sc.tol)
        checks.append({"check": "separation", "exact": exact_ok, "oracle": grid_ok, "agree": exact_ok == grid_ok})
    try:
        pair = find_positive_pair(sc.K, sc.tol)
        for frac in (0.5, 1.0, 1.5):
            p = type(pair)(pair.xstar, pair.alpha * frac)
            exact = classify_aug_pair(sc.K, p, sc.tol).in_cor_a_plus
            grid = oracle_cor_test(sc.K, p, cfg)
            checks.append({"check": f"cor_alpha_x{frac}", "exact": exact, "oracle": grid, "agree": exact == grid})
    except NoPositivePair:
        pass
    agree = all(c["agree"] for c in checks)
    return {"checks": jsonable(checks), "all_agree": agree}, EXIT_OK if agree else EXIT_NUMERICAL


def _export(sc: Scene, samples: int, out: Optional[str]) -> tuple[dict, int]:
    cert = sc.certificate
    if cert is None:
        verdict = strict_bp_separation(sc.K, sc.A, sc.tol)
        cert = verdict.certificate
    text = export_plot(sc.K, sc.A, cert, samples=min(samples, 2048), seed=sc.seed)
    res = {"rows": text.count("\n") - 1, "labels": sorted({ln.split(",")[0] for ln in text.splitlines()[1:]})}
    if out:
        Path(out).write_text(text, encoding="utf-8")
        res["csv"] = str(out)
    else:
        res["csv_text"] = text
    return res, EXIT_OK


def run_scene(path, task: Optional[str] = None, out: Optional[str] = None,
              samples: int = 10_000, seed: Optional[int] = None) -> tuple[Optional[Report], int]:
    """Load a scene, run its task and build the report.  Never raises ConeSepError."""
    t0 = time.perf_counter()
    try:
        sc = load_scene(path, task, seed)
        handlers = {
            "analyze": lambda: _analyze(sc),
            "separate": lambda: _separate(sc, samples),
            "certify": lambda: _certify(sc, samples),
            "oracle-check": lambda: _oracle_check(sc, samples),
            "export-plot": lambda: _export(sc, samples, out),
        }
        results, code = handlers[sc.task]()
    except (InputError, UnsupportedScale) as exc:
        log.error("invalid input: %s", exc)
        return None, EXIT_INPUT
    except NumericalFailure as exc:
        log.error("numerical failure: %s", exc)
        return None, EXIT_NUMERICAL
    except ConeSepError as exc:
        log.error("%s", exc)
        return None, EXIT_NUMERICAL
    report = Report(
        scene=jsonable(sc.echo()), task=sc.task, exit_code=code, results=results,
        wall_time=time.perf_counter() - t0, version=__version__,
    )
    return report, code


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="conesep", description=__doc__.splitlines()[0])
    ap.add_argument("task", choices=TASKS)
    ap.add_argument("--scene", required=True, help="scene JSON file")
    ap.add_argument("--out", help="report path (CSV path for export-plot); stdout if omitted")
    ap.add_argument("--samples", type=int, default=10_000, help="base samples per cone for verification")
    ap.add_argument("--seed", type=int, help="override the scene seed")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="conesep: %(levelname)s: %(message)s", stream=sys.stderr)
    if args.samples < 1:
        log.error("invalid input: --samples must be positive")
        return EXIT_INPUT
    report, code = run_scene(args.scene, args.task, args.out, args.samples, args.seed)
    if report is not None:
        text = report.to_json()
        if args.out and args.task != "export-plot":
            Path(args.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
