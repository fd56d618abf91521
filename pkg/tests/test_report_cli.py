import json

import pytest

from nkcheck.cli import main
from nkcheck.report import (
    REPORT_VERSION,
    CheckRecord,
    CheckReport,
    ConfigError,
    IoFailure,
    RunConfig,
    emit_report,
    load_config,
    parse_config_text,
    render_json,
)
from nkcheck.suites import run_identity_suite


def test_record_pass_flag():
    assert CheckRecord("a", "x = x", 1e-9, 1e-9).passed
    assert not CheckRecord("a", "x = x", 2e-9, 1e-9).passed
    assert not CheckRecord("a", "x = x", float("nan"), 1.0).passed
    with pytest.raises(ValueError):
        CheckRecord("a", "", 0.0, 1.0)


def test_empty_report():
    rep = CheckReport("empty", 0, {})
    assert rep.summary == {"pass": 0, "fail": 0}
    assert rep.ok


def test_json_field_order_and_round_trip():
    rep = CheckReport("demo", 3, RunConfig(seed=3).public())
    rep.add("one", "G(X, Y) = -G(Y, X)", 1e-15, 1e-12, samples=4)
    rep.add("two", "P^2 = Id", 0.5, 1e-12)
    d = json.loads(render_json(rep))
    assert list(d) == ["suite", "seed", "config", "checks", "summary", "duration_ms", "version"]
    assert list(d["checks"][0]) == ["id", "anchor", "residual", "tol", "pass", "sample"]
    assert d["summary"] == {"pass": 1, "fail": 1}
    assert d["version"] == REPORT_VERSION
    assert d["duration_ms"] is None
    back = CheckReport.from_dict(d)
    assert back.to_dict() == rep.to_dict()


def test_emit_to_unwritable_path(tmp_path):
    rep = CheckReport("demo", 0, {})
    with pytest.raises(IoFailure):
        emit_report(rep, "json", str(tmp_path / "missing" / "r.json"))


def test_config_validation():
    with pytest.raises(ConfigError):
        RunConfig(samples=0)
    with pytest.raises(ConfigError):
        RunConfig(tol_algebraic=0.0)
    with pytest.raises(ConfigError):
        RunConfig(format="xml")


def test_config_parsing(tmp_path):
    text = "# comment\nseed = 9\ntol-algebraic = 1e-11\nchart = thm52, cor.f1\n"
    assert parse_config_text(text) == {"seed": 9, "tol_algebraic": 1e-11, "charts": ("thm52", "cor.f1")}
    with pytest.raises(ConfigError):
        parse_config_text("bogus = 1")
    with pytest.raises(ConfigError):
        parse_config_text("seed = many")
    path = tmp_path / "run.cfg"
    path.write_text(text)
    cfg = load_config(str(path), {"seed": 4, "samples": None})
    assert cfg.seed == 4 and cfg.tol_algebraic == 1e-11 and cfg.samples == 1000


def test_identity_suite_small_run():
    rep = run_identity_suite(RunConfig(seed=42, samples=100, deriv_samples=5))
    assert rep.ok, [c.id for c in rep.failures()]
    assert all(c.anchor for c in rep.checks)


def test_cli_exit_codes(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["identities", "--seed", "1", "--samples", "50", "--deriv-samples", "5", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["suite"] == "identities"
    # an impossible tolerance makes checks fail
    assert main(["identities", "--samples", "20", "--deriv-samples", "3", "--tol-algebraic", "1e-300",
                 "--out", str(out)]) == 1
    assert main(["identities", "--samples", "0"]) == 2
    assert main(["chart", "nope"]) == 2
    assert main(["all", "--chart", "nope"]) == 2
    assert main(["bogus-command"]) == 2
    bad = tmp_path / "bad.cfg"
    bad.write_text("what = 1\n")
    assert main(["ode", "--config", str(bad)]) == 2
    capsys.readouterr()


def test_cli_chart_text_and_timing(tmp_path, capsys):
    assert main(["chart", "thm52", "--grid", "2", "--format", "text"]) == 0
    text = capsys.readouterr().out
    assert "thm52.class" in text and "0 failed" in text
    out = tmp_path / "r.json"
    assert main(["laws", "--timing", "--out", str(out)]) == 0
    assert isinstance(json.loads(out.read_text())["duration_ms"], int)
