import json
import math

import pytest

from quadtwist.charsum import mean_square
from quadtwist.errors import ConfigurationError
from quadtwist.pipeline import (
    CSV_COLUMNS,
    ExperimentConfig,
    ExperimentReport,
    decay_slope,
    emit_report,
    load_config,
    parse_config_text,
    read_csv_report,
    run_verify,
)


def test_defaults():
    cfg = ExperimentConfig()
    assert cfg.x_values == [2.0**e for e in range(14, 19)]
    assert cfg.y_of(2.0**14) == 128 and cfg.y_of(1000.0) == 32


def test_y_rules():
    assert ExperimentConfig(x_values=[100.0], y_rule="fixed:7").y_of(100.0) == 7
    assert ExperimentConfig(x_values=[1000.0], y_rule="power:0.4").y_of(1000.0) == math.ceil(1000**0.4)
    with pytest.raises(ConfigurationError):
        ExperimentConfig(y_rule="cube")
    with pytest.raises(ConfigurationError):
        ExperimentConfig(y_rule="fixed:abc")
    with pytest.raises(ConfigurationError):
        ExperimentConfig(x_values=[16.0], y_rule="fixed:1")


@pytest.mark.parametrize(
    "text",
    [
        "x_values=2",
        "x_values=",
        "epsilon=0.3",
        "workers=0",
        "phi_support=1,0.5",
        "psi_support=0.5",
        "method=fast",
        "c0_method=guess",
        "colour=blue",
        "just a line",
        "workers=two",
    ],
)
def test_bad_config(text):
    with pytest.raises(ConfigurationError):
        parse_config_text(text)


def test_config_comments_and_replay():
    text = "# scaling run\nx_values = 64, 256  # two points\ny_rule=power:0.5\nc0_method=diagonal\ndiag_y=64\n"
    cfg = parse_config_text(text)
    assert cfg.x_values == [64.0, 256.0] and cfg.c0_method == "diagonal" and cfg.diag_y == [64.0]
    assert parse_config_text(cfg.to_text()) == cfg


def test_load_config(tmp_path):
    assert load_config(None) == ExperimentConfig()
    p = tmp_path / "c.cfg"
    p.write_text("x_values=100\n")
    assert load_config(str(p)).x_values == [100.0]
    with pytest.raises(ConfigurationError):
        load_config(str(tmp_path / "missing.cfg"))


def test_decay_slope():
    Xs = [2.0**e for e in range(10, 16)]
    assert decay_slope(Xs, [x**-0.25 for x in Xs]) == pytest.approx(-0.25)
    assert math.isnan(decay_slope(Xs[:1], [0.1]))
    assert math.isnan(decay_slope(Xs[:2], [0.1, 0.0]))


def _tiny_config():
    return ExperimentConfig(x_values=[64.0], y_rule="fixed:8", c0_method="diagonal", diag_y=[64.0])


def test_single_point_pipeline(workspace):
    cfg = _tiny_config()
    rep = run_verify(cfg, workspace)
    assert len(rep.records) == 1
    rec = rep.records[0]
    naive = mean_square(64.0, 8.0, cfg.Phi, cfg.Psi, workspace.coeffs, workspace.tables, "naive")
    assert rec["S_brute"] == naive.value_S
    assert rec["predicted"] == rec["C0"] * 64 * 8 > 0
    assert rec["ratio"] == rec["S_brute"] / rec["predicted"]
    assert math.isnan(rep.decay_slope)


def test_pipeline_deterministic_and_sorted(workspace):
    cfg = ExperimentConfig(x_values=[4096.0, 256.0, 1024.0], c0_method="diagonal", diag_y=[256.0, 512.0])
    a, b = run_verify(cfg, workspace), run_verify(cfg, workspace)
    assert [r["X"] for r in a.records] == [256.0, 1024.0, 4096.0]
    strip = [{k: v for k, v in r.items() if k != "seconds"} for r in a.records]
    assert strip == [{k: v for k, v in r.items() if k != "seconds"} for r in b.records]
    assert a.decay_slope == b.decay_slope
    assert parse_config_text(a.config_text) == cfg


def test_pipeline_both_methods(workspace):
    cfg = ExperimentConfig(x_values=[1024.0], c0_method="both")
    rep = run_verify(cfg, workspace)
    rec = rep.records[0]
    assert abs(rec["C0_diagonal"] - rec["C0"]) <= 0.01 * rec["C0"]
    assert rep.C0_details["relative_difference"] <= 0.01


def test_emit_empty_report():
    rep = ExperimentReport([], float("nan"), 1.0, "diagonal", {}, "", {})
    assert emit_report(rep, "csv") == ",".join(CSV_COLUMNS) + "\n"


def test_emit_roundtrip(workspace, tmp_path):
    rep = run_verify(_tiny_config(), workspace)
    path = tmp_path / "r.csv"
    text = emit_report(rep, "csv", str(path))
    assert path.read_text() == text
    lines = text.splitlines()
    assert lines[0] == "X,Y,S_brute,C0,predicted,ratio,abs_dev,seconds" and len(lines) == 2
    back = read_csv_report(text)[0]
    for col in CSV_COLUMNS:
        assert back[col] == rep.records[0][col]
    js = json.loads(emit_report(rep, "json"))
    assert "decay_slope" in js and js["records"] == rep.records
    with pytest.raises(ConfigurationError):
        emit_report(rep, "xml")
