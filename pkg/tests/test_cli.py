import json
from pathlib import Path

import numpy as np
import pytest

from fracent.cli import build_parser, data_section, main, read_series
from fracent.errors import ConfigError
from fracent.scenarios import SCENARIOS, load_config, run_scenario, time_grid, validate

CONFIGS = Path(__file__).resolve().parents[1] / "configs"

SMALL = {
    "scenario": "quench_negativity_vs_time",
    "L": 40,
    "alpha": [0.8, 1.4],
    "m_pre": 2.0,
    "m_post": 1.0,
    "n_A": 4,
    "n_B": 4,
    "n_d": [0, 2],
    "time": {"start": 0, "stop": 10, "step": 0.5},
}


def write(tmp_path, cfg, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(cfg))
    return p


def test_time_grid_closed():
    g = time_grid({"start": 0, "stop": 1, "step": 0.1})
    assert len(g) == 11 and g[-1] == pytest.approx(1.0)
    assert time_grid({"start": 2, "stop": 1, "step": 1}).size == 0


def test_unknown_and_missing_keys():
    with pytest.raises(ConfigError, match="Additional properties"):
        validate({**SMALL, "colour": "blue"})
    cfg = dict(SMALL)
    del cfg["m_pre"]
    with pytest.raises(ConfigError, match="m_pre"):
        validate(cfg)
    with pytest.raises(ConfigError):
        validate({"scenario": "nope"})
    with pytest.raises(ConfigError, match="exceeds L"):
        validate({**SMALL, "n_d": 40})


def test_every_example_config_validates():
    paths = sorted(CONFIGS.glob("*.json")) + sorted((CONFIGS / "full_scale").glob("*.json"))
    assert {load_config(p).scenario for p in paths} == set(SCENARIOS)


def test_run_writes_sorted_rows(tmp_path, capsys):
    out = tmp_path / "o.csv"
    assert main(["run", str(write(tmp_path, SMALL)), "--out", str(out)]) == 0
    cols, rows = read_series(out)
    assert cols == ["alpha", "n_d", "t", "E_LN", "residual", "clamped"]
    keys = [tuple(float(v) for v in r[:3]) for r in rows]
    assert keys == sorted(keys) and len(rows) == 2 * 2 * 21
    assert not list(tmp_path.glob(".*.tmp"))
    header = [line for line in out.read_text().splitlines() if line.startswith("#")]
    assert any(line.startswith("# config: ") for line in header)
    assert any(line.startswith("# created: ") for line in header)


def test_workers_do_not_change_output(tmp_path):
    cfg = write(tmp_path, SMALL)
    texts = []
    for w in ("1", "4"):
        out = tmp_path / f"o{w}.csv"
        assert main(["run", str(cfg), "--out", str(out), "--workers", w]) == 0
        texts.append(data_section(out.read_text()))
    assert texts[0] == texts[1]


def test_json_mirror(tmp_path):
    cfg = {**SMALL, "output": {"path": str(tmp_path / "m.csv"), "format": "csv+json"}}
    assert main(["run", str(write(tmp_path, cfg))]) == 0
    doc = json.loads((tmp_path / "m.json").read_text())
    assert doc["columns"][0] == "alpha" and len(doc["rows"]) == 84


def test_empty_sweep_is_header_only(tmp_path):
    cfg = {**SMALL, "n_d": {"start": 3, "stop": 1}}
    out = tmp_path / "e.csv"
    assert main(["run", str(write(tmp_path, cfg)), "--out", str(out)]) == 0
    assert data_section(out.read_text()).strip() == "alpha,n_d,t,E_LN,residual,clamped"


def test_config_error_exit_code(tmp_path, capsys):
    assert main(["run", str(write(tmp_path, {**SMALL, "bogus": 1}))]) == 2
    record = json.loads(capsys.readouterr().err.strip())
    assert record["error"] == "ConfigError" and record["exit_code"] == 2
    assert main(["validate", str(tmp_path / "missing.json")]) == 2


def test_strict_mode_exit_code(tmp_path, capsys):
    cfg = {**SMALL, "numerics": {"max_residual": 1e-300}}
    path = write(tmp_path, cfg)
    assert main(["run", str(path), "--out", str(tmp_path / "a.csv")]) == 0
    assert main(["run", str(path), "--out", str(tmp_path / "b.csv"), "--strict"]) == 3
    assert json.loads(capsys.readouterr().err.strip())["error"] == "NumericsUnhealthy"
    assert not (tmp_path / "b.csv").exists()


def test_rows_carry_health(tmp_path):
    result = run_scenario(validate(SMALL))
    assert all(row[-2] < 1e-10 and row[-1] >= 0 for row in result.rows)


def test_fit_command(tmp_path, capsys):
    x = np.arange(1, 20)
    lines = ["# synthetic", "alpha,n_d,E_LN,residual,clamped"]
    lines += [f"1.0,{xi},{float(3 * xi ** -2.0)!r},0,0" for xi in x]
    p = tmp_path / "s.csv"
    p.write_text("\n".join(lines) + "\n")
    assert main(["fit", str(p), "--model", "power", "--window", "1:"]) == 0
    rec = json.loads(capsys.readouterr().out.strip())
    assert rec["slope"] == pytest.approx(-2.0, abs=1e-6) and rec["alpha"] == 1.0
    assert main(["fit", str(p), "--model", "exp", "--window", "100:200"]) == 1


def test_help_documents_columns(capsys):
    with pytest.raises(SystemExit):
        build_parser().parse_args(["run", "--help"])
    text = capsys.readouterr().out
    for name in SCENARIOS:
        assert name in text
    assert "E_LN" in text and "residual" in text
