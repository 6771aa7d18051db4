"""CLI: replay verification, inspection, scenario runs, serve lifecycle."""

import json
import signal
import socket
import subprocess
import sys
import time
from pathlib import Path

import pytest

from trigcards import Engine, EngineConfig
from trigcards.cli import main, run_scenario
from trigcards.engine import TXLOG_NAME
from trigcards.ledger import ADMIN_ACTOR

REPO_ROOT = Path(__file__).parent.parent
DEMO_SCENARIO = REPO_ROOT / "scenarios" / "demo.json"


def write_config(tmp_path, **overrides) -> Path:
    raw = {"state_dir": str(tmp_path / "state"), "snapshot_every": 4}
    raw.update(overrides)
    path = tmp_path / "engine.json"
    path.write_text(json.dumps(raw))
    return path


def populate(tmp_path, packs=1) -> Path:
    config_path = write_config(tmp_path)
    engine = Engine(EngineConfig.load(config_path), persist=True)
    engine.submit("CreateAccount", {"account": "alice", "secret": "pw"})
    engine.submit("Faucet", {"actor": ADMIN_ACTOR, "account": "alice", "amount": 100 * packs})
    for _ in range(packs):
        engine.submit("BuyPack", {"actor": "alice"})
    engine.close()
    return config_path


class TestReplayCommand:
    def test_clean_log_ok(self, tmp_path, capsys):
        config_path = populate(tmp_path)
        assert main(["replay", "--config", str(config_path)]) == 0
        out = capsys.readouterr().out
        assert "OK seq=3 hash=" in out

    def test_tampered_payload_exit_1(self, tmp_path, capsys):
        config_path = populate(tmp_path)
        log_path = tmp_path / "state" / TXLOG_NAME
        lines = log_path.read_text().splitlines()
        lines[1] = lines[1].replace('"amount":100', '"amount":101')
        log_path.write_text("\n".join(lines) + "\n")
        assert main(["replay", "--config", str(config_path)]) == 1
        assert "MISMATCH" in capsys.readouterr().out

    def test_truncated_log_exit_2(self, tmp_path, capsys):
        config_path = populate(tmp_path)
        log_path = tmp_path / "state" / TXLOG_NAME
        log_path.write_text(log_path.read_text()[:-15])
        assert main(["replay", "--config", str(config_path)]) == 2
        assert "CORRUPT" in capsys.readouterr().err


class TestInspectCommand:
    def test_fresh_state(self, tmp_path, capsys):
        config_path = write_config(tmp_path)
        assert main(["inspect", "--config", str(config_path)]) == 0
        out = capsys.readouterr().out
        assert "accounts: 0" in out

    def test_after_pack(self, tmp_path, capsys):
        config_path = populate(tmp_path)
        assert main(["inspect", "--config", str(config_path)]) == 0
        out = capsys.readouterr().out
        assert "tokens: 5" in out
        assert "alice: currency=0 xp=0 cards=5" in out

    def test_unknown_account_exit_1(self, tmp_path, capsys):
        config_path = populate(tmp_path)
        assert main(["inspect", "--config", str(config_path), "--account", "ghost"]) == 1
        assert "unknown account" in capsys.readouterr().err


class TestScenarioCommand:
    def test_demo_scenario_passes(self, capsys):
        assert main(["scenario", str(DEMO_SCENARIO)]) == 0
        out = capsys.readouterr().out
        assert "PASS (15 steps)" in out

    def test_scenario_hermetic(self, capsys):
        assert main(["scenario", str(DEMO_SCENARIO)]) == 0
        first = capsys.readouterr().out
        assert main(["scenario", str(DEMO_SCENARIO)]) == 0
        second = capsys.readouterr().out
        first_hash = [l for l in first.splitlines() if l.startswith("final hash")]
        assert first_hash == [l for l in second.splitlines() if l.startswith("final hash")]

    def test_expected_reject_on_valid_tx_fails(self, tmp_path, capsys):
        steps = [
            {"kind": "CreateAccount", "payload": {"account": "a", "secret": "s"}, "expect": "reject"},
        ]
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"steps": steps}))
        assert main(["scenario", str(path)]) == 1
        assert "FAIL at step 0" in capsys.readouterr().out

    def test_wrong_expected_code_fails(self, tmp_path, capsys):
        steps = [
            {"kind": "BuyPack", "payload": {"actor": "ghost"}, "expect": "reject", "code": "InsufficientFunds"},
        ]
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"steps": steps}))
        assert main(["scenario", str(path)]) == 1
        out = capsys.readouterr().out
        assert "expected reject:InsufficientFunds, got reject:UnknownAccount" in out

    def test_empty_scenario_passes(self, tmp_path, capsys):
        path = tmp_path / "empty.json"
        path.write_text(json.dumps({"steps": []}))
        assert main(["scenario", str(path)]) == 0
        assert "PASS (0 steps)" in capsys.readouterr().out

    def test_run_scenario_reports_first_mismatch_index(self):
        engine = Engine(EngineConfig())
        failed_at, _ = run_scenario(
            engine,
            [
                {"kind": "CreateAccount", "payload": {"account": "a", "secret": "s"}},
                {"kind": "CreateAccount", "payload": {"account": "a", "secret": "s"}},
            ],
        )
        assert failed_at == 1


def free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


@pytest.mark.slow
class TestServeCommand:
    def test_serve_sigterm_writes_final_snapshot(self, tmp_path):
        import httpx

        config_path = write_config(tmp_path)
        port = free_port()
        process = subprocess.Popen(
            [sys.executable, "-m", "trigcards.cli", "serve", "--config", str(config_path), "--port", str(port)],
            stdout=subprocess.PIPE,
            stderr=subprocess.STDOUT,
            cwd=str(REPO_ROOT),
        )
        try:
            base = f"http://127.0.0.1:{port}"
            deadline = time.time() + 15
            while True:
                try:
                    httpx.post(f"{base}/api/accounts", json={"account": "alice", "secret": "pw"}, timeout=2)
                    break
                except httpx.HTTPError:
                    if time.time() > deadline:
                        raise AssertionError("server never came up")
                    time.sleep(0.2)
            token = None
            admin = {"Authorization": "Bearer admin"}
            httpx.post(f"{base}/api/admin/faucet", json={"account": "alice", "amount": 100}, headers=admin)
            login = httpx.post(f"{base}/api/session/login", json={"account": "alice", "secret": "pw"})
            token = login.json()["token"]
            httpx.post(
                f"{base}/api/packs/purchase",
                json={"pay_with": "currency"},
                headers={"Authorization": f"Bearer {token}"},
            )
            process.send_signal(signal.SIGTERM)
            assert process.wait(timeout=15) == 0
        finally:
            if process.poll() is None:
                process.kill()
                process.wait()
        state_dir = tmp_path / "state"
        assert (state_dir / "snapshot-3.hash").exists()
        # lock released after clean exit: replay verifies everything
        assert main(["replay", "--config", str(config_path)]) == 0

    def test_second_serve_fails_on_locked_dir(self, tmp_path):
        config_path = write_config(tmp_path)
        engine = Engine(EngineConfig.load(config_path), persist=True)
        try:
            result = subprocess.run(
                [sys.executable, "-m", "trigcards.cli", "serve", "--config", str(config_path), "--port", str(free_port())],
                capture_output=True,
                text=True,
                timeout=30,
            )
            assert result.returncode == 1
            assert "locked" in result.stderr
        finally:
            engine.close()
