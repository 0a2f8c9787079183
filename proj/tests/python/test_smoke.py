import json
import math

import numpy as np
import pytest

import ringlab

ANNULUS = {
    "dimension": 2,
    "outer": {"center": [0, 0], "radius": 2.0},
    "inner": {"center": [0, 0], "radius": 1.0},
}


@pytest.fixture(scope="module")
def annulus():
    return ringlab.solve(ANNULUS)


def test_annulus_values(annulus):
    assert annulus.dimension == 2
    assert annulus.fit["max_residual"] <= 1e-8
    assert annulus.eval([1.5, 0.0]) == pytest.approx(math.log(2 / 1.5) / math.log(2), abs=1e-8)
    g = annulus.grad([1.5, 0.0])
    assert g[0] == pytest.approx(-1 / (1.5 * math.log(2)), abs=1e-7)
    assert g[1] == pytest.approx(0.0, abs=1e-7)
    assert np.trace(annulus.hessian([1.2, 0.7])) == pytest.approx(0.0, abs=1e-10)
    assert annulus.du_kappa1([1.5, 0.0]) == pytest.approx(1 / (2.25 * math.log(2)), abs=1e-6)


def test_level_curve(annulus):
    pts = annulus.level_curve(0.5, 0.02)
    assert pts.shape[1] == 2
    assert np.allclose(np.linalg.norm(pts, axis=1), math.sqrt(2), atol=1e-8)


def test_field_round_trip(annulus):
    doc = json.loads(json.dumps(annulus.to_json()))
    again = ringlab.Field.from_json(doc)
    assert again.eval([1.3, 0.4]) == annulus.eval([1.3, 0.4])


def test_two_point_and_scan(annulus):
    r = ringlab.extremize_Q(annulus, {"kind": "zero"}, levels=6, pairs_per_level=40, refine_top=5)
    assert r["classification"] == "diagonal"
    assert r["strict_interior_extremum"] is False
    assert ringlab.eval_Q(annulus, {"kind": "linear", "a": 0.3}, [1.5, 0.0], [1.5, 0.0]) == 0.0
    s = ringlab.scan_min_du_kappa1(annulus, levels=11, points_per_level=64)
    assert s["boundary_min"] == pytest.approx(1 / (4 * math.log(2)), abs=1e-5)


def test_psi_and_rotation():
    ok, margin = ringlab.check_psi_admissible({"kind": "quadratic_capped", "a": 1.0, "eps": 0.1}, 0.02)
    assert not ok
    assert margin == pytest.approx(-1.0)
    r = ringlab.build_rotation([1.0, 0.0], [0.0, 2.0])
    assert r["scale"] == 0.5
    assert np.allclose(r["matrix"], [[0, -1], [1, 0]])


def test_errors():
    with pytest.raises(ringlab.GeometryError):
        ringlab.solve({"dimension": 2, "outer": {"center": [0, 0], "radius": 1.0},
                       "inner": {"center": [0, 0], "radius": 2.0}})
    with pytest.raises(ringlab.ConfigError):
        ringlab.check_psi_admissible({"kind": "cubic"}, 1.0)
    assert issubclass(ringlab.ConfigError, ringlab.RinglabError)


def test_run(tmp_path):
    config = {"domain": ANNULUS, "psi": {"kind": "zero"},
              "experiment": {"mp": {"levels": 6, "pairs_per_level": 40, "refine_top": 5}},
              "output": {"dir": str(tmp_path)}}
    code, log = ringlab.run(config, "check-mp")
    assert code == 0
    report = json.loads((tmp_path / "check_mp.json").read_text())
    assert report["result"]["max"]["classification"] == "diagonal"
