"""End-to-end command-line checks, exit codes included."""

import json
import math
import subprocess
import sys

import pytest

from retrolab.records import read_records_jsonl


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "retrolab", *args],
        capture_output=True,
        text=True,
    )


def payload_of(proc):
    assert proc.stdout, proc.stderr
    return json.loads(proc.stdout)


def strip_meta(payload):
    return {k: v for k, v in payload.items() if k != "meta"}


def test_run_twobit_quarter_wave():
    proc = run_cli("run", "--model", "twobit", "--sigma-l", "0",
                   "--sigma-r", "1.0472", "--n", "1000000", "--seed", "42")
    assert proc.returncode == 0
    result = payload_of(proc)["result"]
    assert abs(result["p_match_empirical"] - 0.25) < 0.002
    assert result["p_match_analytic"] == pytest.approx(0.24999787927704317, abs=1e-12)


def test_run_equal_settings_repeats_channel():
    proc = run_cli("run", "--model", "qm-discrete", "--sigma-l", "0.7",
                   "--sigma-r", "0.7", "--n", "20000", "--seed", "1")
    result = payload_of(proc)["result"]
    assert result["empirical"]["01"] == 0.0
    assert result["empirical"]["10"] == 0.0


def test_run_unknown_model_exits_2():
    proc = run_cli("run", "--model", "unknown", "--sigma-l", "0", "--sigma-r", "1")
    assert proc.returncode == 2


def test_run_missing_model_exits_2():
    proc = run_cli("run", "--sigma-l", "0", "--sigma-r", "1")
    assert proc.returncode == 2
    assert "model" in proc.stderr


def test_run_is_deterministic():
    args = ("run", "--model", "qm-discrete", "--sigma-l", "0.3",
            "--sigma-r", "1.1", "--n", "100000", "--seed", "9")
    a, b = run_cli(*args), run_cli(*args)
    assert a.returncode == b.returncode == 0
    assert strip_meta(payload_of(a)) == strip_meta(payload_of(b))
    # byte-identical apart from the timestamp line
    lines_a = [l for l in a.stdout.splitlines() if "created_at" not in l]
    lines_b = [l for l in b.stdout.splitlines() if "created_at" not in l]
    assert lines_a == lines_b


def test_run_embeds_resolved_config():
    proc = run_cli("run", "--model", "twobit", "--sigma-l", "0",
                   "--sigma-r", "0.5", "--n", "20000", "--seed", "3")
    cfg = payload_of(proc)["config"]
    assert cfg["model"] == "twobit"
    assert cfg["n"] == 20000 and cfg["seed"] == 3
    assert cfg["tool"] == "retrolab" and "version" in cfg


def test_run_weighted_counts_for_branch_model():
    proc = run_cli("run", "--model", "qm-nocollapse", "--sigma-l", "0.2",
                   "--sigma-r", "0.9", "--n", "50000", "--seed", "5")
    result = payload_of(proc)["result"]
    assert result["weighted_counts"] is True
    assert result["tv_to_analytic"] < 0.01


def test_run_csv_format():
    proc = run_cli("run", "--model", "twobit", "--sigma-l", "0",
                   "--sigma-r", "1.0472", "--n", "20000", "--seed", "2",
                   "--format", "csv")
    lines = proc.stdout.splitlines()
    assert lines[0].startswith("# config:")
    assert lines[1] == "in_channel,out_channel,count,empirical,analytic"
    assert len(lines) == 6


def test_run_records_jsonl(tmp_path):
    path = tmp_path / "recs.jsonl"
    proc = run_cli("run", "--model", "qm-discrete", "--sigma-l", "0",
                   "--sigma-r", "0.5", "--n", "20000", "--seed", "4",
                   "--records", str(path), "--records-limit", "47")
    assert proc.returncode == 0
    recs = read_records_jsonl(path)
    assert len(recs) == 47
    assert all(r.model == "qm-discrete" for r in recs)


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"model": "twobit", "sigma_l": 0.0,
                               "sigma_r": 1.0472, "n": 50000, "seed": 7}))
    proc = run_cli("run", "--config", str(cfg), "--n", "20000")
    out = payload_of(proc)["config"]
    assert out["n"] == 20000  # flag wins
    assert out["seed"] == 7  # config fills the rest


def test_config_unknown_key_exits_2(tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"model": "twobit", "sigma_l": 0, "sigma_r": 1,
                               "bogus": True}))
    proc = run_cli("run", "--config", str(cfg))
    assert proc.returncode == 2
    assert "bogus" in proc.stderr


def test_degrees_flag():
    rad = run_cli("table", "--model", "twobit",
                  "--sigma-l", str(math.pi / 6), "--sigma-r", str(math.pi / 2))
    deg = run_cli("table", "--model", "twobit", "--sigma-l", "30",
                  "--sigma-r", "90", "--degrees")
    assert payload_of(rad)["result"] == payload_of(deg)["result"]


def test_table_pin():
    proc = run_cli("table", "--model", "twobit", "--sigma-l", "0", "--sigma-r", "1.0472")
    assert proc.returncode == 0
    result = payload_of(proc)["result"]
    assert result["p_match"] == pytest.approx(0.24999787927704317, abs=1e-12)


def test_retro_exit_codes():
    proc = run_cli("retro", "twobit", "0", "0", "1.0472")
    assert proc.returncode == 1
    result = payload_of(proc)["result"]
    # 1.0472 carries five digits of pi/3, so the 0.75 carries about as many
    assert result["tv_distance"] == pytest.approx(0.75, abs=1e-5)
    assert result["retro"] is True

    proc = run_cli("retro", "qm-collapse", "0", "0.2", "0.9")
    assert proc.returncode == 0
    assert payload_of(proc)["result"]["tv_distance"] == 0.0

    proc = run_cli("retro", "qm-nocollapse", "0", "0.2", "0.9")
    assert proc.returncode == 0


def test_retro_equal_alt_exits_2():
    proc = run_cli("retro", "twobit", "0", "0.5", "0.5")
    assert proc.returncode == 2


def test_audit_exit_codes():
    proc = run_cli("audit", "qm-discrete", "0", "0.5236", "--n", "100000")
    assert proc.returncode == 0
    assert payload_of(proc)["result"]["verdict"] == "symmetric"

    proc = run_cli("audit", "qm-collapse", "0", "0.5236", "--n", "100000")
    assert proc.returncode == 1
    result = payload_of(proc)["result"]
    assert result["verdict"] == "asymmetric"
    assert result["distinguisher_score"] >= 0.99

    proc = run_cli("audit", "qm-collapse", "0", "0", "--n", "100000")
    assert proc.returncode == 4
    assert payload_of(proc)["result"]["degenerate_settings"] is True


def test_audit_rejects_classical():
    proc = run_cli("audit", "classical", "0", "0.5")
    assert proc.returncode == 2


def test_game_left_discrete():
    proc = run_cli("game", "left", "0.4", "--discrete")
    assert proc.returncode == 0
    result = payload_of(proc)["result"]
    assert result["control_mod"] == "pi/2"
    assert result["achievable"][0] == pytest.approx(0.4)


def test_game_left_classical_has_no_control():
    proc = run_cli("game", "left", "0.4", "--classical")
    assert payload_of(proc)["result"]["achievable"] == "all"


def test_game_right_modes():
    proc = run_cli("game", "right", "0.7", "--mode", "discrete", "--rho", "0.5236")
    result = payload_of(proc)["result"]
    assert result["control_mod"] == "pi/2"
    assert result["shift_detectable"] is True

    proc = run_cli("game", "right", "0.7", "--mode", "nocollapse")
    result = payload_of(proc)["result"]
    assert result["achievable"] == "all"
    assert result["control_mod"] == "none"


def test_game_flag_validation():
    assert run_cli("game", "left", "0.4").returncode == 2
    assert run_cli("game", "left", "0.4", "--discrete", "--classical").returncode == 2
    assert run_cli("game", "right", "0.4").returncode == 2
    assert run_cli("game", "right", "0.4", "--discrete").returncode == 2


def test_out_file(tmp_path):
    path = tmp_path / "out.json"
    proc = run_cli("table", "--model", "onebit", "--sigma-l", "0",
                   "--sigma-r", "0.5", "--out", str(path))
    assert proc.returncode == 0
    assert proc.stdout == ""
    assert json.loads(path.read_text())["config"]["model"] == "onebit"


def test_unwritable_out_exits_3(tmp_path):
    proc = run_cli("table", "--model", "onebit", "--sigma-l", "0",
                   "--sigma-r", "0.5", "--out", str(tmp_path / "no" / "dir" / "x.json"))
    assert proc.returncode == 3
