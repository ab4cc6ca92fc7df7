"""Service endpoints, CLI commands, artifact formats and exit codes."""

import json
import math
import warnings

import pytest
from click.testing import CliRunner

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from starlette.testclient import TestClient

import holonum.experiments as experiments
from holonum import __version__
from holonum.cli import EXIT_CONFIG, EXIT_TOLERANCE, main
from holonum.errors import ToleranceNotMet
from holonum.service import create_app


@pytest.fixture(scope="module")
def client():
    with TestClient(create_app(), raise_server_exceptions=False) as c:
        yield c


@pytest.fixture()
def runner():
    return CliRunner()


class TestService:
    def test_health(self, client):
        resp = client.get("/health")
        assert resp.status_code == 200
        assert resp.json() == {"status": "ok", "version": __version__}

    def test_experiment_list(self, client):
        resp = client.get("/experiments")
        assert resp.status_code == 200
        names = resp.json()["experiments"]
        assert names == sorted(names)
        assert {"frobenius", "fourier", "conformal", "zeta-scan"} <= set(names)

    def test_run_fourier(self, client):
        resp = client.post("/run/fourier", json={"params": {"a": 0.5,
                                                            "n_max": 6}})
        assert resp.status_code == 200
        payload = resp.json()
        assert payload["experiment"] == "fourier"
        assert payload["version"] == __version__
        assert payload["columns"] == ["n", "a_n", "b_n", "b_expected"]
        assert len(payload["rows"]) == 6
        for n, a_n, b_n, expect in payload["rows"]:
            assert abs(b_n - 0.5 ** n) < 1e-10
            assert abs(a_n) < 1e-10

    def test_unknown_experiment_is_400(self, client):
        resp = client.post("/run/nope", json={"params": {}})
        assert resp.status_code == 400
        assert "unknown experiment" in resp.json()["detail"]

    def test_bad_parameter_key_is_400(self, client):
        resp = client.post("/run/fourier", json={"params": {"alpha": 1}})
        assert resp.status_code == 400

    def test_domain_violation_is_400(self, client):
        resp = client.post("/run/fourier", json={"params": {"a": 1.5}})
        assert resp.status_code == 400

    def test_tolerance_failure_is_409(self, client, monkeypatch):
        def boom(params):
            raise ToleranceNotMet("budget exhausted")

        monkeypatch.setitem(experiments.EXPERIMENTS, "fourier", boom)
        resp = client.post("/run/fourier", json={"params": {}})
        assert resp.status_code == 409


class TestCliArtifacts:
    def test_csv_artifact(self, runner, tmp_path):
        out = tmp_path / "fourier.csv"
        result = runner.invoke(main, ["fourier", "--a", "0.5", "--n-max", "4",
                                      "--out", str(out)])
        assert result.exit_code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == f"# holonum {__version__}"
        assert lines[1] == "# experiment: fourier"
        assert lines[2].startswith("# config: ")
        cfg = json.loads(lines[2].removeprefix("# config: "))
        assert cfg == {"a": 0.5, "n_max": 4}
        header = next(l for l in lines if not l.startswith("#"))
        assert header == "n,a_n,b_n,b_expected"
        data = [l for l in lines if not l.startswith("#")][1:]
        assert len(data) == 4
        # 17-significant-digit round-trip floats
        b1 = float(data[0].split(",")[2])
        assert b1 == pytest.approx(0.5, abs=1e-10)

    def test_json_artifact(self, runner, tmp_path):
        out = tmp_path / "airy.json"
        result = runner.invoke(main, ["airy", "--order", "6", "--format",
                                      "json", "--out", str(out)])
        assert result.exit_code == 0
        payload = json.loads(out.read_text())
        assert payload["experiment"] == "airy"
        assert payload["rows"][3][1] == pytest.approx(1.0 / 6.0)

    def test_stdout_default(self, runner):
        result = runner.invoke(main, ["weierstrass", "--m-max", "2"])
        assert result.exit_code == 0
        assert "# experiment: weierstrass" in result.output
        assert "yes" in result.output

    def test_deterministic_bytes(self, runner, tmp_path):
        paths = []
        for name in ("a.csv", "b.csv"):
            p = tmp_path / name
            r = runner.invoke(main, ["zeta-scan", "--n-max", "12", "--m-max",
                                     "1", "--b-max", "2.0", "--b-step", "0.5",
                                     "--out", str(p)])
            assert r.exit_code == 0
            paths.append(p)
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_conformal_with_polygon_file(self, runner, tmp_path):
        poly = tmp_path / "square.json"
        poly.write_text(json.dumps({
            "vertices": [[1, 1], [-1, 1], [-1, -1], [1, -1]],
            "prevertices": [0.0, 0.5 * math.pi, math.pi, 1.5 * math.pi]}))
        out = tmp_path / "conformal.json"
        result = runner.invoke(main, ["conformal", "--polygon", str(poly),
                                      "--trace-points", "16", "--format",
                                      "json", "--out", str(out)])
        assert result.exit_code == 0
        payload = json.loads(out.read_text())
        assert payload["extra"]["gauss_sum"] == pytest.approx(-2.0, abs=1e-12)
        assert len(payload["rows"]) == 16

    def test_run_config_file(self, runner, tmp_path):
        cfg = tmp_path / "cfg.json"
        out = tmp_path / "out.csv"
        cfg.write_text(json.dumps({"experiment": "rlc",
                                   "params": {"R": 1.0},
                                   "output_path": str(out),
                                   "format": "csv"}))
        result = runner.invoke(main, ["run", "--config", str(cfg)])
        assert result.exit_code == 0
        assert "# experiment: rlc" in out.read_text()


class TestCliExitCodes:
    def test_unknown_flag_is_config_error(self, runner):
        result = runner.invoke(main, ["fourier", "--bogus", "1"])
        assert result.exit_code == EXIT_CONFIG

    def test_bad_value_is_config_error(self, runner):
        result = runner.invoke(main, ["fourier", "--a", "1.5"])
        assert result.exit_code == EXIT_CONFIG
        assert "error:" in result.output

    def test_malformed_numbers_rejected(self, runner):
        result = runner.invoke(main, ["frobenius", "--a", "1,two"])
        assert result.exit_code == EXIT_CONFIG

    def test_malformed_config_json(self, runner, tmp_path):
        cfg = tmp_path / "broken.json"
        cfg.write_text('{"experiment": "airy",')
        result = runner.invoke(main, ["run", "--config", str(cfg)])
        assert result.exit_code == EXIT_CONFIG
        assert "line" in result.output

    def test_unknown_config_key(self, runner, tmp_path):
        cfg = tmp_path / "extra.json"
        cfg.write_text(json.dumps({"experiment": "airy", "workers": 4}))
        result = runner.invoke(main, ["run", "--config", str(cfg)])
        assert result.exit_code == EXIT_CONFIG

    def test_tolerance_failure_maps_to_exit_two(self, runner, monkeypatch):
        def boom(params):
            raise ToleranceNotMet("budget exhausted")

        monkeypatch.setitem(experiments.EXPERIMENTS, "airy", boom)
        result = runner.invoke(main, ["airy"])
        assert result.exit_code == EXIT_TOLERANCE
        assert "budget exhausted" in result.output
