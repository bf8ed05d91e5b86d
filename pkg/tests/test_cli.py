import csv
import io
import json
import subprocess
import sys

import pytest

from barrier_resonances.cli import main

from conftest import MU1, MU3_PRIME


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def read_csv(text):
    lines = text.splitlines()
    assert lines[0].startswith("# ")
    config = json.loads(lines[0][2:])
    rows = list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))
    return config, rows


class TestPoles:
    def test_json(self, capsys):
        code, out, _ = run(capsys, "poles", "--count", "3")
        assert code == 0
        doc = json.loads(out)
        assert doc["config"]["count"] == 3 and doc["config"]["barrier"]["b"] == 3.0
        recs = doc["result"]
        assert len(recs) == 3
        assert recs[0]["e_r"] == pytest.approx(MU1.real, abs=2e-3)
        assert all(r["gamma"] > 0 and r["k_im"] < 0 for r in recs)

    def test_narrow_barrier(self, capsys):
        code, out, _ = run(capsys, "poles", "--b", "2.1", "--count", "3")
        mus = [complex(r["mu_re"], r["mu_im"]) for r in json.loads(out)["result"]]
        assert code == 0 and abs(mus[2] - MU3_PRIME) < 2e-3

    def test_zero_count(self, capsys):
        code, out, _ = run(capsys, "poles", "--count", "0")
        assert code == 0 and json.loads(out)["result"] == []

    def test_csv_file(self, capsys, tmp_path):
        path = tmp_path / "poles.csv"
        code, out, _ = run(capsys, "poles", "--count", "2", "--format", "csv", "--out", str(path))
        assert code == 0 and out == ""
        cfg, rows = read_csv(path.read_text())
        assert cfg["format"] == "csv" and len(rows) == 2
        assert set(rows[0]) == {"e_r", "gamma", "mu_re", "mu_im", "k_re", "k_im", "residual"}


class TestState:
    def test_columns(self, capsys):
        code, out, _ = run(capsys, "state", "--count", "3", "--nx", "40", "--order", "2")
        assert code == 0
        cfg, rows = read_csv(out)
        assert cfg["order"] == 2 and cfg["nx"] == 40
        assert list(rows[0]) == ["x", "re_psi", "im_psi", "density"]
        assert len(rows) == 40
        assert float(rows[0]["x"]) == 0 and float(rows[0]["density"]) < 1e-20
        assert float(rows[-1]["x"]) == pytest.approx(9.0)


class TestSurvival:
    def test_initial_row(self, capsys):
        code, out, _ = run(capsys, "survival", "--count", "1", "--nt", "21", "--tmax", "100")
        assert code == 0
        _, rows = read_csv(out)
        assert len(rows) == 21
        assert float(rows[0]["abs_a_sq"]) == pytest.approx(1.0, abs=1e-9)
        assert float(rows[0]["abs_r"]) < 1e-9
        bound = float(rows[0]["bound"])
        assert bound == pytest.approx(0.028, abs=0.005)
        assert max(float(r["abs_r"]) for r in rows) <= bound

    def test_deterministic(self, capsys):
        args = ("survival", "--count", "2", "--pole-index", "1", "--nt", "11", "--tmax", "5")
        assert run(capsys, *args)[1] == run(capsys, *args)[1]


class TestBoundGram:
    def test_bound(self, capsys):
        code, out, _ = run(capsys, "bound", "--b", "2.1", "--count", "3")
        assert code == 0
        res = json.loads(out)["result"]
        assert res["pole_index"] == [0, 1, 2]
        assert res["bound"][2] == pytest.approx(0.422, abs=0.01)

    def test_gram(self, capsys):
        code, out, _ = run(capsys, "gram", "--count", "3")
        res = json.loads(out)["result"]
        assert code == 0 and len(res["re"]) == 3
        assert res["hermitian_error"] == 0 and res["min_eigenvalue"] > 0


class TestConfig:
    def test_flags_override_file(self, capsys, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps({"b": 2.1, "count": 4, "rel-tol": 1e-8}))
        code, out, _ = run(capsys, "poles", "--config", str(path), "--count", "2")
        cfg = json.loads(out)["config"]
        assert code == 0
        assert cfg["barrier"]["b"] == 2.1 and cfg["count"] == 2
        assert cfg["quadrature"]["rel_tol"] == 1e-8

    @pytest.mark.parametrize("content", ["{not json", "[1, 2]", '{"colour": 1}'])
    def test_bad_file(self, capsys, tmp_path, content):
        path = tmp_path / "cfg.json"
        path.write_text(content)
        assert run(capsys, "poles", "--config", str(path))[0] == 2

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "poles", "--config", str(tmp_path / "none.json"))[0] == 2


class TestExitCodes:
    @pytest.mark.parametrize("argv", [
        ["poles", "--bogus"],
        [],
        ["frobnicate"],
        ["poles", "--a", "3", "--b", "2"],
        ["poles", "--v0", "-1"],
        ["poles", "--count", "-1"],
        ["state", "--nx", "1"],
        ["survival", "--tmax", "0"],
        ["state", "--count", "3", "--pole-index", "12"],
        ["state", "--count", "3", "--order", "5"],
        ["poles", "--format", "xml"],
        ["poles", "--rel-tol", "0"],
    ])
    def test_usage(self, capsys, argv):
        code, _, err = run(capsys, *argv)
        assert code == 2 and err

    def test_unwritable_output(self, capsys, tmp_path):
        out = tmp_path / "missing" / "x.json"
        assert run(capsys, "poles", "--count", "1", "--out", str(out))[0] == 2

    def test_computation_failure(self, capsys):
        code, _, err = run(capsys, "survival", "--count", "1", "--nt", "3", "--tmax", "1",
                           "--rel-tol", "1e-17")
        assert code == 1 and "failed" in err


class TestVerify:
    @pytest.mark.slow
    def test_default_passes(self, capsys):
        code, out, _ = run(capsys, "verify")
        doc = json.loads(out)["result"]
        assert code == 0 and doc["passed"]
        assert all(p["status"] == "pass" for p in doc["properties"])

    def test_no_poles(self, capsys):
        code, out, _ = run(capsys, "verify", "--count", "0")
        props = json.loads(out)["result"]["properties"]
        assert code == 0
        assert any(p["status"] == "skipped" for p in props)
        assert not any(p["status"] == "fail" for p in props)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "barrier_resonances", "poles", "--count", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert len(json.loads(proc.stdout)["result"]) == 1
