import csv
import io
import json

import pytest

from hardycert.certify import certify_constant
from hardycert.cli import run
from hardycert.report import render, to_csv, to_json


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


class TestReport:
    def test_json_deterministic(self):
        c = certify_constant(0.5, 0.5, 2.4, 10)
        assert to_json(c) == to_json(certify_constant(0.5, 0.5, 2.4, 10))

    def test_csv_rows(self):
        text = to_csv(certify_constant(0.5, 0.5, 2.4, 10))
        rows = list(csv.reader(io.StringIO(text)))
        assert len(rows) > 10

    def test_text_marks_minimum(self):
        assert "<- min" in render(certify_constant(0.5, 0.5, 2.4, 10), "TEXT")

    def test_bad_format(self):
        with pytest.raises(ValueError):
            render({}, "XML")


class TestCli:
    def test_certify_ok(self):
        code, out, _ = call("certify", "--p", "0.5", "--r", "0.5", "--beta", "2.4", "--kmax", "10", "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert data["status"] == "CERTIFIED" and data["constant"] >= 0.9

    def test_certify_negative(self):
        code, out, _ = call("certify", "--p", "0.5", "--r", "0.5", "--beta", "10", "--kmax", "5", "--format", "json")
        assert code == 2
        assert json.loads(out)["status"].startswith("UNCERTIFIED")

    def test_forced_method_invalid(self):
        code, _, err = call("certify", "--p", "0.5", "--r", "0.5", "--beta", "10", "--method", "LS_BETA")
        assert code == 3 and err

    def test_constants(self):
        code, out, _ = call("constants", "--statement", "THM4", "--p", "0.8", "--format", "json")
        assert code == 0
        assert json.loads(out)["constant"] == pytest.approx(2 * (0.8 / 2.2) ** 0.8, rel=1e-15)

    def test_constants_invalid_region(self):
        code, _, err = call("constants", "--statement", "THM1", "--p", "0.5", "--r", "1")
        assert code == 3 and "(2+r)p" in err

    def test_unknown_command(self):
        assert call("frobnicate")[0] == 3

    def test_missing_statement(self):
        assert call("dual-check")[0] == 3

    def test_no_command(self):
        assert call()[0] == 3

    def test_output_file(self, tmp_path):
        path = tmp_path / "beta.json"
        code, out, _ = call("search-beta", "--p", "0.5", "--r", "0.5", "--format", "json", "--output", str(path))
        assert code == 0 and out == ""
        assert json.loads(path.read_text())["beta"] == pytest.approx(2.4739, abs=1e-3)

    def test_config_with_override(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("command = certify\np = 0.5\nr = 0.5\nbeta = 10\nkmax = 10\nformat = JSON\n")
        code, out, _ = call("--config", str(cfg))
        assert code == 2
        code, out, _ = call("--config", str(cfg), "--beta", "2.4")
        assert code == 0 and json.loads(out)["parameters"]["beta"] == 2.4

    def test_config_unknown_key(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("command = certify\nbogus = 1\n")
        assert call("--config", str(cfg))[0] == 3

    def test_threads_env(self, monkeypatch):
        monkeypatch.setenv("HARDY_THREADS", "2")
        code, out, _ = call("probe", "--statement", "COR1", "--p", "0.5", "--eps", "0.1,0.05", "--format", "json")
        assert code == 0 and len(json.loads(out)["samples"]) == 2

    def test_csv_output(self):
        code, out, _ = call("check-weights", "--family", "pdr", "--param", "-1", "--L", "-1", "--n-max", "50",
                            "--format", "csv")
        assert code == 0 and len(out.strip().splitlines()) >= 50

    def test_check_weights_violation(self):
        code, _, _ = call("check-weights", "--family", "pdr", "--param", "-1", "--L", "-1.5", "--n-max", "10")
        assert code == 2

    def test_dual_check(self):
        code, out, _ = call("dual-check", "--statement", "COR6_5", "--p", "0.5", "--alpha", "-2", "--format", "json")
        assert code == 0 and json.loads(out)["target"]["id"] == "COR6_5_DUAL"
        code, out, _ = call("dual-check", "--norm-check", "--N", "10", "--p", "2", "--trials", "3", "--format", "json")
        assert code == 0

    def test_aux_check(self):
        code, out, _ = call("aux-check", "--which", "bennett_501", "--gamma", "2", "--n-max", "50", "--format", "json")
        assert code == 0 and json.loads(out)["min_slack"] >= 0
        assert call("aux-check", "--which", "BENNETT_501", "--n-max", "5")[0] == 3

    def test_n_sweep(self):
        code, out, _ = call("n-sweep", "--statement", "INEQ_1", "--p", "0.5", "--N-list", "20,60", "--format", "json")
        assert code == 0 and json.loads(out)["monotone_trend"]

    def test_carleman(self):
        code, out, _ = call("carleman", "--family", "pdr", "--param", "-1", "--n-max", "1000", "--format", "json")
        assert code == 0
