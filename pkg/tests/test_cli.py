import csv
import io
import json
import subprocess
import sys

import pytest

import nilnike.quaternion as Q
from nilnike.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def error_of(err):
    return json.loads(err.strip().splitlines()[-1])


def test_exchange_heisenberg(capsys, tmp_path):
    out = tmp_path / "t.json"
    code, stdout, _ = run(capsys, "exchange", "--platform", "heisenberg", "--p", "5", "--m", "1",
                          "--seed", "7", "--out", str(out))
    assert code == 0
    assert json.loads(stdout)["consistent"] is True
    doc = json.loads(out.read_text())
    assert set(doc) == {"platform", "n", "generators", "shares", "key_order"}


def test_exchange_quaternion_five_users(capsys, tmp_path):
    code, stdout, _ = run(capsys, "exchange", "--platform", "quaternion", "--p", "5", "--alpha", "2",
                          "--n", "4", "--seed", "1", "--out", str(tmp_path / "q.json"))
    assert code == 0
    summary = json.loads(stdout)
    assert summary["consistent"] and summary["users"] == 5


def test_exchange_class_unsupported(capsys):
    code, _, err = run(capsys, "exchange", "--platform", "heisenberg", "--n", "3")
    assert code != 0
    assert error_of(err)["error"] == "ClassUnsupported"


def test_exchange_bad_prime(capsys):
    code, _, err = run(capsys, "exchange", "--platform", "cyclic-triple", "--p", "9")
    assert code != 0
    assert error_of(err)["error"] == "ConfigError"


def test_exchange_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert run(capsys, "exchange", "--platform", "quaternion", "--p", "7", "--alpha", "2", "--n", "3",
                   "--seed", "42", "--test-mode", "--out", str(path))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_seed_from_environment(capsys, tmp_path, monkeypatch):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    monkeypatch.setenv("NILNIKE_SEED", "9")
    run(capsys, "exchange", "--platform", "heisenberg", "--p", "101", "--out", str(a))
    monkeypatch.delenv("NILNIKE_SEED")
    run(capsys, "exchange", "--platform", "heisenberg", "--p", "101", "--seed", "9", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_config_file_with_flag_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# quaternion run\nplatform = quaternion\np = 7\nalpha = 2\nn = 2\nseed = 3\n")
    out = tmp_path / "t.json"
    code, _, _ = run(capsys, "exchange", "--config", str(cfg), "--n", "3", "--out", str(out))
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["platform"]["family"] == "quaternion" and doc["n"] == 3


def test_bad_config_line(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("platform heisenberg\n")
    code, _, err = run(capsys, "exchange", "--config", str(cfg))
    assert code != 0 and error_of(err)["error"] == "ConfigError"


def make_transcript(capsys, tmp_path, *flags):
    path = tmp_path / "t.json"
    code, _, _ = run(capsys, "exchange", *flags, "--test-mode", "--out", str(path))
    assert code == 0
    return path


def test_generic_attack_p101(capsys, tmp_path):
    t = make_transcript(capsys, tmp_path, "--platform", "heisenberg", "--p", "101", "--seed", "2")
    code, stdout, _ = run(capsys, "attack", "--transcript", str(t), "--attack", "generic")
    assert code == 0
    report = json.loads(stdout)["reports"][0]
    assert report["success"] and report["matches_honest"] is True


def test_linear_attack_61_bit_where_generic_refuses(capsys, tmp_path):
    t = make_transcript(capsys, tmp_path, "--platform", "heisenberg", "--p", str(2**61 - 1), "--seed", "2")
    code, stdout, _ = run(capsys, "attack", "--transcript", str(t), "--attack", "heisenberg-linear")
    assert code == 0
    code, stdout, err = run(capsys, "attack", "--transcript", str(t), "--attack", "generic")
    assert code != 0
    assert json.loads(stdout)["reports"][0]["error"] == "BudgetExceeded"
    assert error_of(err)["error"] == "AttackFailed"


def test_attack_truncated_transcript(capsys, tmp_path):
    t = make_transcript(capsys, tmp_path, "--platform", "heisenberg", "--p", "101", "--seed", "2")
    doc = json.loads(t.read_text())
    doc["shares"] = doc["shares"][:-1]
    t.write_text(json.dumps(doc))
    code, _, err = run(capsys, "attack", "--transcript", str(t))
    assert code != 0
    assert error_of(err)["error"] == "MissingShare"


def test_attack_detects_wrong_honest_key(capsys, tmp_path):
    t = make_transcript(capsys, tmp_path, "--platform", "cyclic-triple", "--p", "3", "--alpha", "3", "--seed", "4")
    doc = json.loads(t.read_text())
    for k in doc["derived_keys"]:
        k["key_hex"] = k["key_hex"][:-2] + ("00" if k["key_hex"][-2:] != "00" else "01")
    t.write_text(json.dumps(doc))
    code, stdout, err = run(capsys, "attack", "--transcript", str(t))
    assert code != 0
    assert json.loads(stdout)["reports"][0]["matches_honest"] is False


def test_attack_report_is_byte_stable(capsys, tmp_path):
    t = make_transcript(capsys, tmp_path, "--platform", "quaternion", "--p", "7", "--alpha", "2", "--n", "3",
                        "--seed", "5")
    outs = []
    for name in ("r1.json", "r2.json"):
        path = tmp_path / name
        assert run(capsys, "attack", "--transcript", str(t), "--no-timing", "--out", str(path))[0] == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_attack_inapplicable(capsys, tmp_path):
    t = make_transcript(capsys, tmp_path, "--platform", "cyclic-triple", "--p", "5", "--seed", "1")
    code, _, err = run(capsys, "attack", "--transcript", str(t), "--attack", "quaternion-linear")
    assert code != 0 and error_of(err)["error"] == "ConfigError"


def test_attack_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "attack", "--transcript", str(tmp_path / "nope.json"))
    assert code != 0 and error_of(err)["error"] == "ConfigError"


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_bench_empty_grid(capsys):
    code, stdout, _ = run(capsys, "bench")
    assert code == 0
    assert stdout == "platform,p,alpha,n,algorithm,ops,millis,refused\n"


def test_bench_grid_rows_and_determinism(capsys):
    argv = ["bench", "--platform", "heisenberg,cyclic-triple", "--p", "101", "--p", "401",
            "--trials", "4", "--seed", "3", "--no-timing"]
    code, first, _ = run(capsys, *argv)
    assert code == 0
    code, second, _ = run(capsys, *argv, "--workers", "2")
    assert first == second
    rows = read_csv(first)
    assert [(r["platform"], r["p"], r["algorithm"]) for r in rows] == [
        ("heisenberg", "101", "generic"),
        ("heisenberg", "101", "heisenberg-linear"),
        ("heisenberg", "401", "generic"),
        ("heisenberg", "401", "heisenberg-linear"),
        ("cyclic-triple", "101", "generic"),
        ("cyclic-triple", "401", "generic"),
    ]


def test_bench_refused_rows(capsys):
    code, stdout, _ = run(capsys, "bench", "--platform", "heisenberg", "--p", str(2**61 - 1), "--trials", "1")
    assert code == 0
    rows = {r["algorithm"]: r for r in read_csv(stdout)}
    assert rows["generic"]["refused"] == "1"
    assert rows["heisenberg-linear"]["refused"] == "0"


def test_verify_defaults(capsys):
    code, stdout, _ = run(capsys, "verify")
    assert code == 0
    assert all(line.startswith("PASS") for line in stdout.splitlines())


def test_verify_layer_power_formula_suite(capsys):
    code, stdout, _ = run(capsys, "verify", "--suite", "layer-power-formula", "--p", "7", "--alpha", "2",
                          "--trials", "200")
    assert code == 0
    assert stdout.strip() == "PASS layer-power-formula"


def test_verify_names_corrupted_sign_table(capsys, monkeypatch):
    monkeypatch.setattr(Q, "SIGN_TABLE", Q.SIGN_TABLE._replace(ji=1))
    code, stdout, err = run(capsys, "verify")
    assert code != 0
    first_fail = next(line for line in stdout.splitlines() if line.startswith("FAIL"))
    assert first_fail.startswith("FAIL quaternion-relations")
    assert error_of(err)["invariant"] == "quaternion-relations"


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["exchange", "--p", "five"])
    assert exc.value.code == 2


def test_console_script_module(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "nilnike.cli", "exchange", "--platform", "heisenberg", "--p", "5", "--seed", "7"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["key_order"] == 5
