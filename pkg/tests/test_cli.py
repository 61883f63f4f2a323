import json
from pathlib import Path

import numpy as np
import pytest

from conesep import AugPair, NormSpec, make_union
from conesep.cli import main, run_scene
from conesep.errors import InputError, UnsupportedScale
from conesep.plot import export_plot
from conesep.scene import Report, dumps, parse_scene

SCENES = Path(__file__).resolve().parent.parent / "scenes"
TWO_RAYS = SCENES / "two_rays.json"
CEX = SCENES / "l1_counterexample.json"
TWO_CERT = SCENES / "two_rays_certify.json"


def write(tmp_path, data, name="scene.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data) if not isinstance(data, str) else data)
    return p


def test_separate_two_rays(capsys):
    assert main(["separate", "--scene", str(TWO_RAYS), "--samples", "2000"]) == 0
    rep = json.loads(capsys.readouterr().out)
    cert = rep["results"]["verdict"]["certificate"]
    assert np.allclose(cert["xstar"], [-1, -1], atol=1e-7)
    assert 0.447 < cert["alpha"] < 1
    assert rep["exit_code"] == 0 and rep["task"] == "separate"


def test_separate_l1_counterexample(capsys):
    assert main(["separate", "--scene", str(CEX)]) == 3
    rep = json.loads(capsys.readouterr().out)
    obs = rep["results"]["verdict"]["obstruction"]
    assert obs["reason"] == "HullsIntersect"
    assert np.allclose(obs["witness_point"], [0.5, 0.5], atol=1e-9)


def test_certify(capsys):
    assert main(["certify", "--scene", str(TWO_CERT), "--samples", "2000"]) == 0
    assert json.loads(capsys.readouterr().out)["results"]["certified"]


def test_certify_tampered(tmp_path):
    data = json.loads(TWO_CERT.read_text())
    data["certificate"]["alpha"] = 1.1
    assert main(["certify", "--scene", str(write(tmp_path, data)), "--samples", "500"]) == 3


def test_analyze_and_oracle_check(tmp_path):
    out = tmp_path / "r.json"
    assert main(["analyze", "--scene", str(CEX), "--out", str(out)]) == 0
    res = json.loads(out.read_text())["results"]["analysis"]
    assert res["necessary_conditions"] and not res["hulls_disjoint"]
    assert main(["oracle-check", "--scene", str(TWO_RAYS), "--samples", "1000", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["results"]["all_agree"]


@pytest.mark.parametrize("mutate", [
    lambda d: d["K"].update(pieces=[[[0, 0]]]),
    lambda d: d["A"].update(pieces=[]),
    lambda d: d.update(norm="l7"),
    lambda d: d.update(dimension=1),
    lambda d: d.pop("norm"),
    lambda d: d["A"].update(pieces=[[[1, 0, 0]]]),
])
def test_malformed_scenes_exit_2(tmp_path, mutate):
    data = json.loads(TWO_RAYS.read_text())
    mutate(data)
    assert main(["separate", "--scene", str(write(tmp_path, data))]) == 2


def test_unreadable_inputs_exit_2(tmp_path):
    assert main(["separate", "--scene", str(tmp_path / "missing.json")]) == 2
    assert main(["separate", "--scene", str(write(tmp_path, "{not json"))]) == 2
    assert main(["certify", "--scene", str(TWO_RAYS)]) == 2  # no certificate
    assert main(["separate", "--scene", str(TWO_RAYS), "--samples", "0"]) == 2


def test_export_plot_3d_exit_2(tmp_path):
    data = {"dimension": 3, "norm": "l2", "K": {"pieces": [[[-1, 0, 0]]]}, "A": {"pieces": [[[0, 1, 0]]]}}
    assert main(["export-plot", "--scene", str(write(tmp_path, data))]) == 2


def test_deterministic_reports():
    a, _ = run_scene(TWO_RAYS, "separate", samples=1000)
    b, _ = run_scene(TWO_RAYS, "separate", samples=1000)
    a.wall_time = b.wall_time = 0.0
    assert a.to_json() == b.to_json()


def test_report_round_trip():
    rep, code = run_scene(TWO_RAYS, "separate", samples=500)
    back = Report.from_json(rep.to_json())
    assert back.exit_code == code
    assert back.to_json() == rep.to_json()
    assert back.results["verdict"]["certificate"]["alpha"] == rep.results["verdict"]["certificate"]["alpha"]


def test_dumps_exact_floats():
    x = [0.1, 1 / 3, 1e-300, 2.0, 7]
    assert json.loads(dumps(x)) == x
    assert dumps(2.0) == "2.0" and dumps(7) == "7"


def test_scene_overrides():
    sc = parse_scene(json.loads(TWO_RAYS.read_text()), task="analyze", seed=11)
    assert sc.task == "analyze" and sc.seed == 11 and sc.echo()["seed"] == 11
    with pytest.raises(InputError):
        parse_scene(json.loads(TWO_RAYS.read_text()), task="fly")


def test_export_plot_labels(tmp_path, capsys):
    csv_path = tmp_path / "two_rays.csv"
    assert main(["export-plot", "--scene", str(TWO_RAYS), "--out", str(csv_path), "--samples", "200"]) == 0
    labels = {ln.split(",")[0] for ln in csv_path.read_text().splitlines()[1:]}
    assert labels == {"A_ray", "K_ray", "A_base", "K_base", "A_hull", "K_hull", "BP_boundary", "hyperplane"}
    assert json.loads(capsys.readouterr().out)["results"]["csv"] == str(csv_path)


def test_export_plot_without_certificate():
    ns = NormSpec("l1", 2)
    K = make_union([[[-0.6, -0.4], [-0.4, -0.6]]], ns)
    A = make_union([[[1, 0], [0.8, 0.2]], [[0.2, 0.8], [0, 1]]], ns)
    labels = {ln.split(",")[0] for ln in export_plot(K, A, None, 64).splitlines()[1:]}
    assert "BP_boundary" not in labels and "A_hull" in labels


def test_export_plot_bp_boundary_is_zero_level():
    ns = NormSpec("l2", 2)
    K = make_union([[[-1, 0], [0, -1]]], ns)
    A = make_union([[[-1, 2]], [[2, -1]]], ns)
    text = export_plot(K, A, AugPair([-1, -1], 0.7), 64)
    pts = np.array([[float(v) for v in ln.split(",")[1:]] for ln in text.splitlines()[1:]
                    if ln.startswith("BP_boundary")])
    pts = pts[np.linalg.norm(pts, axis=1) > 0.5]
    assert len(pts) == 2
    assert np.allclose(pts @ [-1, -1] + 0.7 * np.linalg.norm(pts, axis=1), 0, atol=1e-10)


def test_export_plot_rejects_3d():
    ns = NormSpec("l2", 3)
    with pytest.raises(UnsupportedScale):
        export_plot(make_union([[[1, 0, 0]]], ns), make_union([[[0, 1, 0]]], ns))
