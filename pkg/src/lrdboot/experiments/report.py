"""Writing scenario results to disk.

Files written by :func:`emit_report`:

``report.json``       full report (schema ``lrdboot.report/1``), incl. runtime
``diagnostics.csv``   n,statistic,size,mean,sd,skewness,excess_kurtosis,ks
``jm_estimate.csv``   n,series,x,jhat,jm_true_abs,abs_error  (series 0 of each n)
``config_echo.json``  the parsed configuration, re-parseable for an exact rerun

CSV files contain no timing information, so equal seeds give equal bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

from ..estimator import true_abs_jm
from .config import serialize_config
from .diagnostics import DiagnosticsSummary
from .scenario import STATISTICS, ScenarioReport

__all__ = [
    "REPORT_FILES",
    "DIAGNOSTICS_COLUMNS",
    "JM_COLUMNS",
    "diagnostics_csv",
    "jm_estimate_csv",
    "emit_report",
    "prepare_output_dir",
    "load_series_csv",
]

REPORT_FILES = ("report.json", "diagnostics.csv", "jm_estimate.csv", "config_echo.json")
DIAGNOSTICS_COLUMNS = ["n", "statistic", "size", "mean", "sd", "skewness", "excess_kurtosis", "ks"]
JM_COLUMNS = ["n", "series", "x", "jhat", "jm_true_abs", "abs_error"]


def _num(v) -> str:
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return ""
    return repr(float(v))


def _writer():
    buf = io.StringIO()
    return buf, csv.writer(buf, lineterminator="\r\n")


def diagnostics_csv(report: ScenarioReport) -> str:
    buf, w = _writer()
    w.writerow(DIAGNOSTICS_COLUMNS)
    for lev in report.levels:
        for stat in STATISTICS:
            d = lev.diagnostics.get(stat)
            if isinstance(d, DiagnosticsSummary):
                w.writerow(
                    [lev.n, stat, d.size, _num(d.mean), _num(d.sd), _num(d.skewness),
                     _num(d.excess_kurtosis), _num(d.ks)]
                )
            else:
                w.writerow([lev.n, stat, lev.pool(stat).size, "", "", "", "", ""])
    return buf.getvalue()


def jm_estimate_csv(report: ScenarioReport) -> str:
    buf, w = _writer()
    w.writerow(JM_COLUMNS)
    truth = true_abs_jm(report.profile, report.grid)
    for lev in report.levels:
        est = report.jm_estimate(lev.n, 0)
        for x, v, t in zip(report.grid.x, est.values, truth):
            w.writerow([lev.n, 0, _num(x), _num(v), _num(t), _num(abs(v - t))])
    return buf.getvalue()


def prepare_output_dir(path, overwrite: bool) -> Path:
    """Create ``path`` or refuse to reuse a non-empty directory without ``overwrite``."""
    out = Path(path)
    if out.exists() and not out.is_dir():
        raise NotADirectoryError(f"{out} exists and is not a directory")
    if out.is_dir() and any(out.iterdir()) and not overwrite:
        raise FileExistsError(f"{out} is not empty; pass overwrite to replace its contents")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write(path: Path, text: str):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def emit_report(report: ScenarioReport, directory, overwrite: bool = False) -> list[Path]:
    """Write the four report files into ``directory`` and return their paths."""
    out = prepare_output_dir(directory, overwrite)
    payload = {
        "report.json": json.dumps(report.to_dict(), indent=2, sort_keys=True, allow_nan=True) + "\n",
        "diagnostics.csv": diagnostics_csv(report),
        "jm_estimate.csv": jm_estimate_csv(report),
        "config_echo.json": serialize_config(report.config),
    }
    paths = []
    for name in REPORT_FILES:
        target = out / name
        _write(target, payload[name])
        paths.append(target)
    return paths


def load_series_csv(path) -> list[float]:
    """Read a plain one-column numeric CSV (an optional non-numeric header is skipped)."""
    values = []
    with open(path, newline="", encoding="utf-8") as fh:
        for k, row in enumerate(csv.reader(fh)):
            if not row or not row[0].strip():
                continue
            if len(row) != 1:
                raise ValueError(f"{path}:{k + 1}: expected one column, got {len(row)}")
            try:
                values.append(float(row[0]))
            except ValueError:
                if k == 0 and not values:
                    continue
                raise ValueError(f"{path}:{k + 1}: not a number: {row[0]!r}") from None
    if not values:
        raise ValueError(f"{path}: no numeric values")
    return values
