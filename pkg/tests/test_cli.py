import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from nonfreeness import models, stateio
from nonfreeness.cli import main
from nonfreeness.fock import Bipartition
from nonfreeness.measures import nonfreeness
from nonfreeness.states import restrict, tensor_product
from nonfreeness.verify import CSV_COLUMNS


def report_of(capsys):
    return json.loads(capsys.readouterr().out)["report"]


@pytest.fixture
def heisenberg4(tmp_path):
    path = tmp_path / "h4.json"
    assert main(["model", "heisenberg", "--sites", "4", "--out", str(path)]) == 0
    return path


class TestModelAndCompute:
    def test_heisenberg(self, heisenberg4, capsys):
        assert main(["compute", str(heisenberg4)]) == 0
        assert report_of(capsys)["nonfreeness"] == pytest.approx(8.0, abs=1e-8)

    def test_double_slater(self, tmp_path, capsys):
        path = tmp_path / "ds.json"
        assert main(["model", "double-slater", "--m", "3", "--out", str(path)]) == 0
        assert main(["compute", str(path)]) == 0
        assert report_of(capsys)["nonfreeness"] == pytest.approx(6.0, abs=1e-9)

    def test_slater_file(self, tmp_path, capsys):
        path = tmp_path / "s.json"
        stateio.write_state(path, models.random_slater(5, 3, n=2))
        assert main(["compute", str(path), "--cross-check"]) == 0
        r = report_of(capsys)
        assert r["nonfreeness"] <= 1e-9
        assert r["kernel_condition_ok"] and r["clip_magnitude"] < 1e-12

    def test_cross_check_and_corr(self, tmp_path, capsys):
        path = tmp_path / "m.json"
        stateio.write_state(path, models.random_mixed(4, 5))
        assert main(["compute", str(path), "--cross-check", "--corr"]) == 0
        r = report_of(capsys)
        assert abs(r["cross_check"] - r["nonfreeness"]) <= 1e-8
        assert np.isfinite(r["corr_fidelity"])

    def test_log_base_and_provenance(self, tmp_path, capsys):
        path = tmp_path / "m.json"
        stateio.write_state(path, models.random_mixed(3, 2))
        main(["compute", str(path)])
        bits = json.loads(capsys.readouterr().out)
        main(["compute", str(path), "--log-base", "e"])
        nats = json.loads(capsys.readouterr().out)
        assert nats["provenance"]["log_base"] == "e"
        assert bits["provenance"]["input_digest"] == stateio.digest(path.read_bytes())
        assert bits["report"]["nonfreeness"] * np.log(2) == pytest.approx(nats["report"]["nonfreeness"], abs=1e-12)

    def test_out_file_and_determinism(self, tmp_path):
        path = tmp_path / "m.json"
        stateio.write_state(path, models.random_mixed(3, 9))
        main(["compute", str(path), "--out", str(tmp_path / "a.json")])
        main(["compute", str(path), "--out", str(tmp_path / "b.json")])
        assert (tmp_path / "a.json").read_text() == (tmp_path / "b.json").read_text()

    def test_model_to_stdout(self, capsys):
        assert main(["model", "double-slater", "--m", "2"]) == 0
        assert json.loads(capsys.readouterr().out)["kind"] == "pure"


class TestRestrict:
    def test_single_site(self, heisenberg4, tmp_path, capsys):
        out = tmp_path / "site.json"
        assert main(["restrict", str(heisenberg4), "--modes", "1,2", "--out", str(out)]) == 0
        assert report_of(capsys)["nonfreeness"] == pytest.approx(1.0, abs=1e-9)
        site = stateio.parse_state(out)
        np.testing.assert_allclose(site.to_dense(), np.diag([0, 0.5, 0.5, 0]), atol=1e-12)

    def test_all_modes_matches_compute(self, heisenberg4, capsys):
        main(["compute", str(heisenberg4)])
        whole = report_of(capsys)
        main(["restrict", str(heisenberg4), "--modes", ",".join(str(i) for i in range(1, 9))])
        part = report_of(capsys)
        for key in ("nonfreeness", "S_delta", "S_gamma"):
            assert part[key] == pytest.approx(whole[key], abs=1e-12)

    def test_product_factor_recovered(self, tmp_path, capsys):
        r1, r2 = models.random_mixed(2, 1), models.random_mixed(2, 2)
        path = tmp_path / "prod.json"
        stateio.write_state(path, tensor_product(r1, r2))
        out = tmp_path / "f1.json"
        assert main(["restrict", str(path), "--modes", "1,2", "--out", str(out),
                     "--report", str(tmp_path / "r.json")]) == 0
        assert stateio.parse_state(out).distance(r1) < 1e-12
        assert capsys.readouterr().out == ""

    def test_matches_library(self, tmp_path, capsys):
        rho = models.random_mixed(4, 3)
        path = tmp_path / "m.json"
        stateio.write_state(path, rho)
        main(["restrict", str(path), "--modes", "4,2"])
        expected = restrict(rho, Bipartition((1, 3), 4))
        assert report_of(capsys)["nonfreeness"] == pytest.approx(nonfreeness(expected).nonfreeness, abs=1e-12)

    @pytest.mark.parametrize("modes", ["", "0", "9", "1,1", "a"])
    def test_bad_mode_list(self, heisenberg4, modes):
        assert main(["restrict", str(heisenberg4), "--modes", modes]) == 2


class TestVerify:
    @pytest.mark.parametrize("suite", ["monotonicity", "additivity", "superadditivity",
                                       "prop1", "rank2", "bounds", "car"])
    def test_suites_pass(self, suite, capsys):
        assert main(["verify", "--suite", suite, "--trials", "10", "--seed", "7", "--max-modes", "5"]) == 0
        captured = capsys.readouterr()
        rows = list(csv.DictReader(io.StringIO(captured.out)))
        assert tuple(rows[0].keys()) == CSV_COLUMNS
        assert len(rows) == 10
        assert all(r["ok"] == "True" for r in rows)
        assert "10/10 trials ok" in captured.err

    def test_car_residuals_exact(self, capsys):
        main(["verify", "--suite", "car", "--trials", "6"])
        rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
        assert all(float(r["lhs"]) == 0 for r in rows)

    def test_seeded_determinism(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["verify", "--suite", "prop1", "--trials", "5", "--seed", "3", "--out", str(a)])
        main(["verify", "--suite", "prop1", "--trials", "5", "--seed", "3", "--out", str(b)])
        assert a.read_text() == b.read_text()

    def test_unknown_suite(self):
        assert main(["verify", "--suite", "nope"]) == 2


class TestExitCodes:
    def test_odd_sites(self):
        assert main(["model", "heisenberg", "--sites", "3"]) == 2

    def test_capacity(self):
        assert main(["model", "heisenberg", "--sites", "10"]) == 4

    def test_missing_file(self, tmp_path):
        assert main(["compute", str(tmp_path / "absent.json")]) == 2

    def test_malformed(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{")
        assert main(["compute", str(path)]) == 2

    def test_numerical_failure(self, monkeypatch):
        from nonfreeness import verify
        from nonfreeness.errors import NumericalError

        def broken(*args, **kwargs):
            raise NumericalError("forced")

        monkeypatch.setattr(verify, "run_suite", broken)
        assert main(["verify", "--suite", "car", "--trials", "1"]) == 3

    def test_failed_trial_is_numerical(self, monkeypatch):
        from dataclasses import replace

        from nonfreeness import verify

        real = verify.run_suite

        def failing(*args, **kwargs):
            rows = real(*args, **kwargs)
            return [replace(rows[0], ok=False)] + rows[1:]

        monkeypatch.setattr(verify, "run_suite", failing)
        assert main(["verify", "--suite", "car", "--trials", "2"]) == 3


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "nonfreeness.cli", "model", "double-slater", "--m", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["modes"] == 4
