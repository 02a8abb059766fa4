import csv
import io
import json

import pytest

from gl3twist.config import DEFAULT_SWEEPS, DEFAULT_TOLERANCES, ENV_VAR, RunConfig
from gl3twist.errors import ConfigError
from gl3twist.report import Report, comparable, record


def test_defaults_round_trip():
    cfg = RunConfig()
    again = RunConfig.loads(cfg.dumps())
    assert again.to_dict() == cfg.to_dict()
    assert again.tolerances == DEFAULT_TOLERANCES
    assert again.sweeps == DEFAULT_SWEEPS


def test_overrides_merge_over_defaults():
    cfg = RunConfig.from_dict({"tolerances": {"delta.exact": 1e-12}, "jobs": 3})
    assert cfg.tol("delta.exact") == 1e-12
    assert cfg.tol("delta.padic") == DEFAULT_TOLERANCES["delta.padic"]
    assert cfg.jobs == 3


@pytest.mark.parametrize("raw", [
    {"colour": 1},
    {"tolerances": {"delta.nope": 1.0}},
    {"sweeps": {"delta.nope": [1]}},
    {"tolerances": {"delta.exact": -1}},
    {"tolerances": {"delta.exact": "small"}},
    {"format": "xml"},
    {"jobs": 0},
    {"precision_bits": 20},
])
def test_invalid_configs(raw):
    with pytest.raises(ConfigError):
        RunConfig.from_dict(raw)


def test_bad_json():
    with pytest.raises(ConfigError):
        RunConfig.loads("{not json")


def test_env_var(tmp_path, monkeypatch):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"seed": 7}))
    monkeypatch.setenv(ENV_VAR, str(path))
    assert RunConfig.load().seed == 7
    monkeypatch.delenv(ENV_VAR)
    assert RunConfig.load().seed == RunConfig().seed


def test_missing_file():
    with pytest.raises(ConfigError):
        RunConfig.load("/nonexistent/cfg.json")


def _report():
    rep = Report("demo")
    rep.records.append(record("demo", "a", "first", {"x": 1}, 0.5, 1.0))
    rep.records.append(record("demo", "b", "second", {"x": [1, 2]}, 2 + 1j, 1.0))
    rep.records.append(record("demo", "c", "audit", {}, 0.0, None, passed=True))
    return rep


def test_record_pass_rule():
    rep = _report()
    assert [r.passed for r in rep.records] == [True, False, True]
    assert not rep.all_pass
    assert [r.check_id for r in rep.failures()] == ["b"]
    assert rep.records[0].ratio == pytest.approx(0.5)


def test_json_layout():
    data = json.loads(_report().to_json())
    assert set(data) == {"suite", "generated_at", "records", "all_pass"}
    rec = data["records"][1]
    assert set(rec) == {"suite", "check_id", "paper_anchor", "params", "value_re", "value_im", "bound",
                        "ratio", "pass"}
    assert (rec["value_re"], rec["value_im"], rec["pass"]) == (2.0, 1.0, False)
    assert data["records"][2]["bound"] is None


def test_csv_layout():
    rows = list(csv.DictReader(io.StringIO(_report().to_csv())))
    assert len(rows) == 3
    assert json.loads(rows[1]["params"]) == {"x": [1, 2]}


def test_comparable_ignores_timestamp():
    a, b = _report(), _report()
    b.generated_at = "1999-01-01T00:00:00Z"
    assert comparable(a.to_json()) == comparable(b.to_json())
