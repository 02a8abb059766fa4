import json
import subprocess
import sys
from pathlib import Path

import pytest

from gl3twist.cli import main
from gl3twist.report import comparable

REDUCED = str(Path(__file__).with_name("reduced_config.json"))


@pytest.mark.parametrize("argv,expected", [
    (["expsums.kloosterman", "a=1", "b=1", "c=3"], "-1"),
    (["expsums.ramanujan_sum", "q=6", "n=1"], "1"),
    (["deltacore.delta_exact", "n=0", "Q=20"], "1"),
    (["deltacore.delta_exact", "n=7", "Q=20"], "0"),
    (["deltacore.delta_padic", "n=9", "Q=15", "p=3", "λ=2"], "0"),
    (["charsums.quintic_root_count", "p=7", "nu1=1", "m=1", "mp=2", "qh=1", "qph=3", "xi=1"], None),
    (["expcalc.balance", "θ=2/5", "ρ=2/5"], "27/40"),
])
def test_compute_examples(argv, expected, capsys):
    assert main(["compute", *argv]) == 0
    first = capsys.readouterr().out.splitlines()[0]
    if expected is not None:
        assert first == expected


def test_compute_bound_annotation(capsys):
    assert main(["compute", "expsums.kloosterman", "a=1", "b=2", "c=5"]) == 0
    assert "pass" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ["compute", "nosuch.op"],
    ["compute", "expsums.kloosterman", "a=1", "b=1"],
    ["compute", "expsums.kloosterman", "a=1", "b=1", "c=3", "d=4"],
    ["compute", "expsums.kloosterman", "a=1", "b"],
    ["compute", "deltacore.delta_padic", "n=15", "Q=15", "p=3", "lam=2"],
])
def test_compute_usage_errors(argv):
    assert main(argv) == 2


def test_verify_bad_config_key(tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"tolerances": {"delta.nonsense": 1}}))
    assert main(["verify", "delta", "--config", str(cfg)]) == 2


def test_verify_unknown_suite():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nosuch"])
    assert exc.value.code == 2


def test_verify_injected_tolerance_fails(tmp_path):
    raw = json.loads(Path(REDUCED).read_text())
    raw["tolerances"] = {"delta.exact": 1e-30}
    cfg = tmp_path / "tight.json"
    cfg.write_text(json.dumps(raw))
    out = tmp_path / "r.json"
    assert main(["verify", "delta", "--config", str(cfg), "--out", str(out)]) == 1
    data = json.loads(out.read_text())
    assert not data["all_pass"]
    assert any(r["check_id"].startswith("delta.exact") and not r["pass"] for r in data["records"])


def test_verify_delta_passes_and_writes_csv(tmp_path):
    out = tmp_path / "r.csv"
    assert main(["verify", "delta", "--config", REDUCED, "--format", "csv", "--out", str(out)]) == 0
    assert out.read_text().splitlines()[0].startswith("suite,check_id")


def test_verify_jobs_do_not_change_report(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify", "charsum", "--config", REDUCED, "--out", str(a), "--jobs", "1"]) == 0
    assert main(["verify", "charsum", "--config", REDUCED, "--out", str(b), "--jobs", "2"]) == 0
    assert comparable(a.read_text()) == comparable(b.read_text())


def test_config_from_environment(tmp_path, monkeypatch):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"tolerances": {"delta.exact": 1e-30}, "sweeps": {"delta.Q": [20]}}))
    monkeypatch.setenv("GL3TWIST_CONFIG", str(cfg))
    assert main(["verify", "delta", "--out", str(tmp_path / "r.json")]) == 1


def test_console_script_runs():
    proc = subprocess.run([sys.executable, "-m", "gl3twist.cli", "compute", "expsums.gauss_sum", "p=3", "k=2", "j=1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "|tau| = p^(k/2)" in proc.stdout
