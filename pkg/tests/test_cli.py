import json
import subprocess
import sys

import pytest

from lrdboot.cli import EXIT_CONFIG, EXIT_IO, EXIT_NUMERIC, main

TINY = {
    "model": {"family": "poly", "d_exp": 0.3},
    "transform": "identity",
    "n": [128],
    "l_rule": {"kind": "fixed", "l": 8},
    "A": 10,
    "R": 3,
    "master_seed": 2,
}


def write(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_presets_listing(capsys):
    assert main(["presets"]) == 0
    out = capsys.readouterr().out
    assert "smoke" in out and "hermite2-m2" in out


def test_run_writes_reports(tmp_path):
    out = tmp_path / "o"
    assert main(["run", "--config", write(tmp_path, TINY), "--out", str(out)]) == 0
    assert sorted(p.name for p in out.iterdir()) == sorted(
        ["report.json", "diagnostics.csv", "jm_estimate.csv", "config_echo.json"]
    )


def test_overwrite_guard(tmp_path):
    out = tmp_path / "o"
    cfg = write(tmp_path, TINY)
    assert main(["run", "--config", cfg, "--out", str(out)]) == 0
    assert main(["run", "--config", cfg, "--out", str(out)]) == EXIT_IO
    assert main(["run", "--config", cfg, "--out", str(out), "--overwrite"]) == 0


def test_estimate_jm(tmp_path):
    out = tmp_path / "e"
    assert main(["estimate-jm", "--config", write(tmp_path, TINY), "--out", str(out)]) == 0
    summary = json.loads((out / "jm_summary.json").read_text())
    assert len(summary["runs"]) == 3
    assert (out / "jm_estimate.csv").read_bytes().startswith(b"n,series,x,jhat,jm_true_abs,abs_error\r\n")


def test_estimate_from_data(tmp_path):
    series = tmp_path / "y.csv"
    series.write_text("\n".join(str(0.01 * ((7 * k) % 101) - 0.5) for k in range(200)))
    doc = dict(TINY, n=[200], m_override=1, data=str(series))
    out = tmp_path / "d"
    assert main(["estimate-jm", "--config", write(tmp_path, doc), "--out", str(out)]) == 0
    rows = (out / "jm_estimate.csv").read_text().splitlines()
    assert rows[1].endswith(",,")


@pytest.mark.parametrize(
    "doc",
    [dict(TINY, l_rule={"kind": "power", "beta": 1.5}), dict(TINY, unknown=1), dict(TINY, n="x")],
)
def test_config_errors(tmp_path, doc, capsys):
    assert main(["run", "--config", write(tmp_path, doc), "--out", str(tmp_path / "o")]) == EXIT_CONFIG
    assert "config error" in capsys.readouterr().err


def test_unknown_preset(tmp_path):
    assert main(["run", "--preset", "nope", "--out", str(tmp_path / "o")]) == EXIT_CONFIG


def test_regime_error(tmp_path, capsys):
    doc = dict(TINY, model={"family": "poly", "d_exp": 0.6}, transform="square")
    assert main(["run", "--config", write(tmp_path, doc), "--out", str(tmp_path / "o")]) == EXIT_NUMERIC
    assert "m * D" in capsys.readouterr().err


def test_missing_config_file(tmp_path):
    assert main(["run", "--config", str(tmp_path / "none.json"), "--out", str(tmp_path / "o")]) == EXIT_IO


def test_bad_threads(tmp_path):
    assert main(["run", "--config", write(tmp_path, TINY), "--threads", "0"]) == EXIT_CONFIG


def test_console_script_module(tmp_path):
    res = subprocess.run(
        [sys.executable, "-m", "lrdboot.cli", "run", "--preset", "smoke", "--out", str(tmp_path / "s")],
        capture_output=True, text=True,
    )
    assert res.returncode == 0, res.stderr
    assert "report.json" in res.stdout
