import json
import math
import subprocess
import sys

import numpy as np
import pytest

from taxihyp import io as tio
from taxihyp.circles import CircleSpec, Region, intersects_region
from taxihyp.cli import main
from taxihyp.curves import l_shaped
from taxihyp.hyperbolicity import GeodesicLine, lines_intersect, on_line, required_delta_array
from taxihyp.metric import Point, distance


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


class TestDistance:
    def test_ln3(self, capsys):
        code, rep = run_json(capsys, "distance", 0.5, 0, 0, 0.5)
        assert code == 0
        assert rep["distance"] == pytest.approx(1.098612288668, abs=1e-11)
        assert rep["minimal_point"] == [0, 0]
        assert rep["case"] == "case2"

    def test_same_point(self, capsys):
        code, rep = run_json(capsys, "distance", 0, 0, 0, 0)
        assert code == 0 and rep["distance"] == 0 and rep["case"] == "same_point"

    def test_outside_disk(self, capsys):
        code, out, err = run(capsys, "distance", 0.9, 0.3, 0, 0)
        assert code == 2 and "outside the disk" in err and out == ""

    def test_malformed(self):
        with pytest.raises(SystemExit) as exc:
            main(["distance", "0.1", "zero", "0", "0"])
        assert exc.value.code == 2

    def test_csv(self, capsys):
        code, out, _ = run(capsys, "distance", 0.3, 0.4, 0.5, 0.2, "--format", "csv")
        lines = out.splitlines()
        assert code == 0 and lines[0] == "name,value"
        assert "minimal_point,0.3 0.2" in lines

    def test_svg_refused(self, capsys):
        code, _, err = run(capsys, "distance", 0.3, 0.4, 0.5, 0.2, "--format", "svg")
        assert code == 2 and "--format" in err

    def test_scientific_negative_coordinates(self, capsys):
        code, rep = run_json(capsys, "distance", "-4.5e-05", "0.2", "0.1", "-1E-3")
        assert code == 0 and rep["p"] == [-4.5e-05, 0.2] and rep["q"] == [0.1, -0.001]

    def test_round_trip(self, capsys):
        rng = np.random.default_rng(0)
        for a, b in rng.uniform(-0.45, 0.45, size=(20, 2, 2)):
            _, rep = run_json(capsys, "distance", *a, *b)
            p, q = Point(*rep["p"]), Point(*rep["q"])
            # inputs are themselves printed at 12 digits, so allow one unit in the last place
            assert distance(p, q) == pytest.approx(rep["distance"], rel=1e-11, abs=1e-12)


class TestGeodesic:
    def test_three_vertex_csv(self, capsys):
        code, out, _ = run(capsys, "geodesic", 0.3, 0.4, 0.5, 0.2)
        assert code == 0
        assert out.splitlines() == ["x1,x2", "0.3,0.4", "0.3,0.2", "0.5,0.2"]
        assert tio.curve_from_csv(out) == l_shaped(Point(0.3, 0.4), Point(0.5, 0.2))

    def test_opposite_quadrants_pass_origin(self, capsys):
        code, out, _ = run(capsys, "geodesic", 0.3, 0.4, -0.2, -0.1, "--format", "json")
        assert json.loads(out)[1] == [0, 0]

    def test_same_point(self, capsys):
        code, _, err = run(capsys, "geodesic", 0.1, 0.1, 0.1, 0.1)
        assert code == 2 and "distinct" in err

    def test_svg_file(self, capsys, tmp_path):
        target = tmp_path / "g.svg"
        code, out, _ = run(capsys, "geodesic", 0.3, 0.4, 0.5, 0.2, "--format", "svg",
                           "--out", target)
        assert code == 0 and out == ""
        svg = target.read_text()
        assert svg.startswith("<svg") and "<polyline" in svg and "0,1 -1,0" in svg


class TestCircle:
    def test_origin_diamond(self, capsys):
        code, rep = run_json(capsys, "circle", 0, 0, math.atanh(0.5), "--samples", 8)
        assert code == 0
        pts = np.vstack([pc["points"] for pc in rep["pieces"]])
        assert np.allclose(np.abs(pts).sum(axis=1), 0.5, atol=1e-11)

    def test_regions_match_predicates(self, capsys):
        code, rep = run_json(capsys, "circle", 0.4, 0.3, 0.9, "--verify")
        assert code == 0 and rep["probe_mismatches"] == []
        spec = CircleSpec(Point(0.4, 0.3), 0.9)
        assert rep["regions"] == {r.value: intersects_region(spec, r) for r in Region}

    def test_concentric_csv(self, capsys):
        for r in (0.2, 0.5, 1.2):
            code, out, _ = run(capsys, "circle", 0.4, 0.3, r, "--format", "csv")
            back = tio.labelled_from_csv(out)
            assert out.splitlines()[0] == "piece_label,x1,x2"
            spec = CircleSpec(Point(0.4, 0.3), r)
            for pts in back.values():
                d = [distance(spec.center, Point(*x)) for x in pts]
                assert np.allclose(d, r, atol=1e-9)

    def test_bad_radius(self, capsys):
        code, _, err = run(capsys, "circle", 0.1, 0.1, -1)
        assert code == 2


class TestOracle:
    def test_report(self, capsys):
        code, rep = run_json(capsys, "oracle", 0.5, 0, 0, 0.5)
        assert code == 0
        assert rep["rel_error"] < 0.01 and rep["h"] == 0.005
        assert set(rep) == {"query", "dp_value", "closed_form", "rel_error", "h", "seed"}

    def test_fails_verification_with_tight_tolerance(self, capsys):
        code, rep = run_json(capsys, "oracle", 0.3, 0.4, 0.5, 0.2, "--h", 0.02,
                             "--tol", "oracle_rel=1e-20")
        assert code == 1 and rep["rel_error"] > 1e-20

    def test_bad_step(self, capsys):
        assert run(capsys, "oracle", 0.5, 0, 0, 0.5, "--h", 0)[0] == 2

    def test_out_of_extent(self, capsys):
        code, _, err = run(capsys, "oracle", 0.97, 0, 0, 0.5)
        assert code == 2 and "extent" in err

    def test_bad_tol(self, capsys):
        assert run(capsys, "oracle", 0.5, 0, 0, 0.5, "--tol", "nonsense=1")[0] == 2


class TestGromovScan:
    def test_theta(self, capsys):
        code, rep = run_json(capsys, "gromov-scan", "--samples", 20000)
        assert code == 0
        assert 0.49 <= rep["max_required_delta"] <= 0.549306144 + 1e-9
        assert rep["base_point"] == "theta" and rep["seed"] == 0

    def test_random_family_only(self, capsys):
        code, rep = run_json(capsys, "gromov-scan", "--samples", 0, "--base", "random")
        assert code == 0
        assert rep["max_required_delta"] == pytest.approx(math.log(3), abs=1e-3)
        P, Q, S, W = (np.asarray(x)[None] for x in rep["argmax_quadruple"])
        assert tio.fmt(required_delta_array(P, Q, S, W)[0]) == tio.fmt(rep["max_required_delta"])

    def test_seed_env_fallback(self, capsys, monkeypatch):
        monkeypatch.setenv("TAXIHYP_SEED", "17")
        _, rep = run_json(capsys, "gromov-scan", "--samples", 1000)
        assert rep["seed"] == 17
        _, rep = run_json(capsys, "gromov-scan", "--samples", 1000, "--seed", 3)
        assert rep["seed"] == 3

    def test_bad_env_seed(self, capsys, monkeypatch):
        monkeypatch.setenv("TAXIHYP_SEED", "abc")
        assert run(capsys, "gromov-scan", "--samples", 10)[0] == 2

    def test_deterministic(self, capsys):
        a = run(capsys, "gromov-scan", "--samples", 5000, "--base", "random", "--seed", 4)[1]
        b = run(capsys, "gromov-scan", "--samples", 5000, "--base", "random", "--seed", 4)[1]
        assert a == b


class TestPlayfair:
    ARGS = ("playfair", "--line", 0.3, 0.5, 0.5, 0.3, "--point", -0.3, -0.2)

    def test_witnesses(self, capsys):
        code, rep = run_json(capsys, *self.ARGS, "-n", 5)
        assert code == 0 and len(rep["witnesses"]) == 5
        base = rep["line"]
        line = GeodesicLine(tuple(base["ideal_a"]),
                            None if base["corner"] is None else Point(*base["corner"]),
                            tuple(base["ideal_b"]))
        for w in rep["witnesses"]:
            g = GeodesicLine(tuple(w["ideal_a"]),
                             None if w["corner"] is None else Point(*w["corner"]),
                             tuple(w["ideal_b"]))
            assert on_line(g, Point(-0.3, -0.2), tol=1e-10)
            assert not lines_intersect(g, line)

    def test_svg(self, capsys):
        code, out, _ = run(capsys, *self.ARGS, "-n", 3, "--format", "svg")
        assert code == 0 and out.count("<polyline") == 4

    def test_zero(self, capsys):
        code, rep = run_json(capsys, *self.ARGS, "-n", 0)
        assert code == 0 and rep["witnesses"] == []

    def test_point_on_line(self, capsys):
        code, _, err = run(capsys, "playfair", "--line", 0.3, 0.5, 0.5, 0.3, "--point", 0.3, 0.4)
        assert code == 2 and "lies on the line" in err

    def test_shortfall(self, capsys):
        code, _, err = run(capsys, *self.ARGS, "-n", 100000)
        assert code == 1 and "found" in err


class TestIsometryCheck:
    def test_passes(self, capsys):
        code, rep = run_json(capsys, "isometry-check", "--trials", 2000)
        assert code == 0
        assert len(rep["max_deviation"]) == 8 and rep["closed_under_composition"]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "taxihyp", "distance", "0.5", "0", "0", "0.5"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["minimal_point"] == [0, 0]
