"""`ges` command line: exit codes, imports, compute outputs, serve."""

from __future__ import annotations

import json
import socket
import subprocess
import sys
import time
from pathlib import Path

import pytest
from click.testing import CliRunner

from conftest import DEMO_DIR
from labges.cli import main

TRAVEL_TSV = DEMO_DIR.joinpath("cogitamus_travel_2019.tsv").read_bytes()
COMMUTES_CSV = DEMO_DIR.joinpath("cogitamus_commutes_2019.csv").read_bytes()


@pytest.fixture()
def runner() -> CliRunner:
    return CliRunner()


class TestValidate:
    def test_demo_ok(self, runner, demo_inventory_path):
        result = runner.invoke(main, ["validate", str(demo_inventory_path)])
        assert result.exit_code == 0, result.output

    def test_broken_fixture_exit_1(self, runner, tmp_path):
        doc = json.loads(DEMO_DIR.joinpath("cogitamus_2019.json").read_text("utf-8"))
        doc["lab"]["members"] = {"researcher": 0}
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(doc))
        result = runner.invoke(main, ["validate", str(path)])
        assert result.exit_code == 1
        assert "lab.members" in result.stderr

    def test_missing_file_exit_2(self, runner):
        result = runner.invoke(main, ["validate", "/nonexistent/inventory.json"])
        assert result.exit_code == 2

    def test_stdin_dash(self, runner):
        raw = DEMO_DIR.joinpath("cogitamus_2019.json").read_bytes()
        result = runner.invoke(main, ["validate", "-"], input=raw.decode("utf-8"))
        assert result.exit_code == 0


class TestImports:
    def test_import_travel_gains_legs(self, runner, demo_inventory_path, tmp_path):
        tsv = tmp_path / "t.tsv"
        tsv.write_bytes(TRAVEL_TSV)
        result = runner.invoke(main, ["import-travel", str(demo_inventory_path), str(tsv)])
        assert result.exit_code == 0, result.output
        doc = json.loads(demo_inventory_path.read_text("utf-8"))
        assert len(doc["trips"]) == 45
        assert sum(len(t["legs"]) for t in doc["trips"]) == 52

    def test_partial_errors_exit_0(self, runner, demo_inventory_path, tmp_path):
        tsv = tmp_path / "t.tsv"
        tsv.write_bytes(
            b"1\t03/06/2019\tToulouse\tFrance\tParis\tFrance\tTrain\t\tOUI\t\t\n"
            b"2\tbad-date\tToulouse\tFrance\tParis\tFrance\tTrain\t\tOUI\t\t\n"
        )
        result = runner.invoke(main, ["import-travel", str(demo_inventory_path), str(tsv)])
        assert result.exit_code == 0
        assert "line 2" in result.stderr
        assert "1 rows in error" in result.output

    def test_zero_rows_exit_1(self, runner, demo_inventory_path, tmp_path):
        tsv = tmp_path / "t.tsv"
        tsv.write_bytes(b"only\tgarbage\n")
        result = runner.invoke(main, ["import-travel", str(demo_inventory_path), str(tsv)])
        assert result.exit_code == 1

    def test_import_commutes(self, runner, demo_inventory_path, tmp_path):
        csv_path = tmp_path / "c.csv"
        csv_path.write_bytes(COMMUTES_CSV)
        result = runner.invoke(main, ["import-commutes", str(demo_inventory_path), str(csv_path)])
        assert result.exit_code == 0
        doc = json.loads(demo_inventory_path.read_text("utf-8"))
        assert len(doc["commute_responses"]) == 40


def _computed_dir(runner, demo_inventory_path, tmp_path, *extra) -> Path:
    tsv = tmp_path / "t.tsv"
    tsv.write_bytes(TRAVEL_TSV)
    csv_path = tmp_path / "c.csv"
    csv_path.write_bytes(COMMUTES_CSV)
    assert runner.invoke(main, ["import-travel", str(demo_inventory_path), str(tsv)]).exit_code == 0
    assert runner.invoke(main, ["import-commutes", str(demo_inventory_path), str(csv_path)]).exit_code == 0
    out = tmp_path / "out"
    result = runner.invoke(
        main, list(extra) + ["compute", str(demo_inventory_path), "--out", str(out)]
    )
    assert result.exit_code == 0, result.output
    return out


class TestCompute:
    def test_demo_writes_five_files(self, runner, demo_inventory_path, tmp_path):
        out = _computed_dir(runner, demo_inventory_path, tmp_path)
        files = sorted(p.name for p in out.iterdir())
        assert files == [
            "cogitamus_2019_regulatory.csv",
            "cogitamus_2019_result.json",
            "cogitamus_2019_synthetic_pie.svg",
            "cogitamus_2019_travel_by_purpose.svg",
            "cogitamus_2019_travel_by_status.svg",
        ]

    def test_missing_factor_exit_1(self, runner, tmp_path):
        doc = json.loads(DEMO_DIR.joinpath("cogitamus_2019.json").read_text("utf-8"))
        doc["buildings"][0]["refrigerant_leaks"] = [{"gas": "R999", "kg": 1.0}]
        path = tmp_path / "inv.json"
        path.write_text(json.dumps(doc))
        result = runner.invoke(main, ["compute", str(path), "--out", str(tmp_path / "out")])
        assert result.exit_code == 1
        assert "R999" in result.stderr

    def test_locale_fr_labels(self, runner, demo_inventory_path, tmp_path):
        out = _computed_dir(runner, demo_inventory_path, tmp_path, "--locale", "fr")
        csv_text = (out / "cogitamus_2019_regulatory.csv").read_text("utf-8")
        assert "Déplacements domicile travail" in csv_text
        assert "Employee commuting" not in csv_text

    def test_synthetic_table_on_stdout(self, runner, demo_inventory_path, tmp_path):
        tsv = tmp_path / "t.tsv"
        tsv.write_bytes(TRAVEL_TSV)
        runner.invoke(main, ["import-travel", str(demo_inventory_path), str(tsv)])
        result = runner.invoke(
            main, ["compute", str(demo_inventory_path), "--out", str(tmp_path / "out")]
        )
        assert "Professional travel" in result.output
        assert "no commute survey responses" in result.stderr


class TestComputeMatchesService:
    def test_cli_and_service_results_byte_identical(self, runner, demo_inventory_path, tmp_path):
        out = _computed_dir(runner, demo_inventory_path, tmp_path)
        cli_bytes = (out / "cogitamus_2019_result.json").read_bytes()

        from fastapi.testclient import TestClient

        from labges.service import ServiceConfig, create_app

        app = create_app(ServiceConfig(data_dir=str(tmp_path / "svc")))
        with TestClient(app) as client:
            inv_id = client.post(
                "/api/inventories",
                content=DEMO_DIR.joinpath("cogitamus_2019.json").read_bytes(),
            ).json()["id"]
            client.post(
                f"/api/inventories/{inv_id}/travel", files={"file": ("t.tsv", TRAVEL_TSV, "text/plain")}
            )
            client.post(
                f"/api/inventories/{inv_id}/commutes",
                files={"file": ("c.csv", COMMUTES_CSV, "text/plain")},
            )
            service_bytes = client.post(f"/api/inventories/{inv_id}/compute").content
        assert cli_bytes == service_bytes


class TestServe:
    def test_bad_config_exit_2(self, runner):
        result = runner.invoke(main, ["serve", "--config", "/nonexistent/config.json"])
        assert result.exit_code == 2

    def test_unresolvable_factor_path_exit_2(self, runner, tmp_path):
        config = tmp_path / "cfg.json"
        config.write_text(json.dumps({"factors": "/nonexistent/factors.json"}))
        result = runner.invoke(main, ["serve", "--config", str(config)])
        assert result.exit_code == 2

    def test_port_in_use_exit_2(self, runner, tmp_path):
        blocker = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        blocker.bind(("127.0.0.1", 0))
        blocker.listen(1)
        port = blocker.getsockname()[1]
        config = tmp_path / "cfg.json"
        config.write_text(json.dumps({"service": {"port": port, "data_dir": str(tmp_path / "d")}}))
        try:
            result = runner.invoke(main, ["serve", "--config", str(config)])
            assert result.exit_code == 2
            assert "cannot bind" in result.stderr
        finally:
            blocker.close()

    def test_serve_answers_health(self, tmp_path):
        with socket.socket() as probe:
            probe.bind(("127.0.0.1", 0))
            port = probe.getsockname()[1]
        config = tmp_path / "cfg.json"
        config.write_text(
            json.dumps({"service": {"port": port, "data_dir": str(tmp_path / "data")}})
        )
        process = subprocess.Popen(
            [sys.executable, "-m", "labges.cli", "serve", "--config", str(config)],
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
        )
        try:
            import httpx

            deadline = time.time() + 15
            status = None
            while time.time() < deadline:
                try:
                    status = httpx.get(f"http://127.0.0.1:{port}/api/health", timeout=1.0).status_code
                    break
                except Exception:
                    time.sleep(0.2)
            assert status == 200
        finally:
            process.terminate()
            process.wait(timeout=10)
