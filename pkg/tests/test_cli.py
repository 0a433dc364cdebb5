"""File formats and the command-line interface, including exit codes."""

import json
import math

import numpy as np
import pytest

from crosp import io
from crosp.cli import main
from crosp.errors import DomainError
from crosp.spaces import PointSet, parse_space, sample_uniform

S2 = parse_space("s2")


class TestStableJson:
    def test_deterministic(self):
        doc = {"a": 1 / 3, "b": [1, 2.5, "x"], "c": {"d": True, "e": None}}
        assert io.dumps_stable(doc) == io.dumps_stable(doc)

    def test_seventeen_digits_roundtrip(self):
        x = 0.1 + 0.2
        text = io.dumps_stable({"v": x})
        assert json.loads(text)["v"] == x

    def test_rejects_nan(self):
        with pytest.raises(DomainError):
            io.dumps_stable({"v": float("nan")})


class TestPointSetFormat:
    def test_roundtrip(self, tmp_path):
        pts = sample_uniform(S2, 5, np.random.default_rng(3), label="demo")
        path = tmp_path / "pts.json"
        io.save_pointset(path, pts)
        loaded = io.load_pointset(path)
        assert loaded.space == S2
        assert loaded.label == "demo"
        assert np.allclose(loaded.points, pts.points)

    def test_malformed_rejected(self):
        with pytest.raises(DomainError):
            io.pointset_from_dict({"space": {"family": "s", "n": 2},
                                   "points": [[1.0, 0.0]]})

    def test_distance_matrix_roundtrip(self, tmp_path):
        dm = np.array([[0.0, 1.2], [1.2, 0.0]])
        path = tmp_path / "dm.csv"
        io.save_distance_matrix(path, dm)
        assert np.allclose(io.load_distance_matrix(path), dm)


class TestCli:
    def test_spaces_lists_catalog(self, capsys):
        assert main(["spaces", "--no-meta"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert [row["code"] for row in doc["spaces"]] == [
            "s1", "s2", "s3", "rp2", "cp2", "hp2", "op2"]
        assert doc["config"]["seed"] == 0

    def test_constants_values(self, capsys):
        assert main(["constants", "--space", "s2", "--no-meta"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["gamma"] == pytest.approx(2.0, rel=1e-14)
        assert doc["avg_chordal"] == pytest.approx(2 / 3, rel=1e-13)
        assert doc["avg_symdiff"] == pytest.approx(1 / 3, rel=1e-13)

    def test_gen_energy_discrepancy_roundtrip(self, tmp_path, capsys):
        out = tmp_path / "pts.json"
        assert main(["gen", "--space", "cp2", "--n", "6", "--seed", "11",
                     "--no-meta", "--out", str(out)]) == 0
        assert main(["energy", "--in", str(out), "--no-meta"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["quantity"] == "pair_sum" and doc["n_points"] == 6
        assert main(["discrepancy", "--in", str(out), "--route", "closed",
                     "--no-meta"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["value"] > 0 and doc["route"] == "closed"

    def test_gen_byte_identical_for_same_argv(self, tmp_path, monkeypatch):
        argv = ["gen", "--space", "s3", "--n", "4", "--seed", "5", "--no-meta",
                "--out", "pts.json"]
        d1, d2 = tmp_path / "run1", tmp_path / "run2"
        for d in (d1, d2):
            d.mkdir()
            monkeypatch.chdir(d)
            assert main(argv) == 0
        assert (d1 / "pts.json").read_bytes() == (d2 / "pts.json").read_bytes()

    def test_mc_route_deterministic(self, tmp_path, capsys):
        out = tmp_path / "pts.json"
        main(["gen", "--space", "s2", "--n", "5", "--seed", "2", "--no-meta",
              "--out", str(out)])
        args = ["discrepancy", "--in", str(out), "--route", "mc", "--samples",
                "20000", "--seed", "4", "--threads", "2", "--no-meta"]
        assert main(args) == 0
        first = capsys.readouterr().out
        assert main(args) == 0
        second = capsys.readouterr().out
        assert first == second
        doc = json.loads(first)
        assert doc["stderr"] > 0

    def test_distance_matrix_input(self, tmp_path, capsys):
        dm = tmp_path / "dm.csv"
        theta = 2.0
        io.save_distance_matrix(dm, np.array([[0.0, theta], [theta, 0.0]]))
        assert main(["energy", "--in", str(dm), "--space", "s1", "--no-meta"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["value"] == pytest.approx(2 * math.sin(theta / 2), rel=1e-14)

    def test_antipodal_closed_value(self, tmp_path, capsys):
        pts = PointSet.from_points(parse_space("s1"),
                                   [np.array([1.0, 0.0]), np.array([-1.0, 0.0])])
        path = tmp_path / "anti.json"
        io.save_pointset(path, pts)
        assert main(["discrepancy", "--in", str(path), "--route", "closed",
                     "--no-meta"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["value"] == pytest.approx(16 / math.pi**2 - 4 / math.pi, abs=1e-12)

    def test_octonionic_gen_exit_code(self, capsys):
        assert main(["gen", "--space", "op2", "--n", "10"]) == 3
        err = capsys.readouterr().err
        assert "octonionic" in err

    def test_usage_error_exit_code(self):
        with pytest.raises(SystemExit) as exc:
            main(["constants", "--space", "s2", "--bogus-flag"])
        assert exc.value.code == 2

    def test_verify_pass_exit_code(self, capsys):
        assert main(["verify", "watson", "--no-meta"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["all_passed"] is True

    def test_verify_fail_exit_code(self, capsys):
        # an unreachable tolerance forces a recorded failure, exit code 1
        assert main(["verify", "pointwise", "--space", "s1", "--tol", "1e-15",
                     "--no-meta"]) == 1
        doc = json.loads(capsys.readouterr().out)
        assert doc["all_passed"] is False

    def test_verify_csv_format(self, capsys):
        assert main(["verify", "watson", "--format", "csv", "--no-meta"]) == 0
        out = capsys.readouterr().out
        assert out.splitlines()[0].startswith("identity,verdict")

    def test_env_seed_fallback(self, tmp_path, monkeypatch):
        monkeypatch.setenv("CROSP_SEED", "99")
        a = tmp_path / "a.json"
        main(["gen", "--space", "s2", "--n", "3", "--no-meta", "--out", str(a)])
        monkeypatch.delenv("CROSP_SEED")
        b = tmp_path / "b.json"
        main(["gen", "--space", "s2", "--n", "3", "--seed", "99", "--no-meta",
              "--out", str(b)])
        pa, pb = json.loads(a.read_text()), json.loads(b.read_text())
        assert pa["config"]["seed"] == pb["config"]["seed"] == 99
        assert pa["points"] == pb["points"]
