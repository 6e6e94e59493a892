"""Configuration, scenario orchestration, diagnostics and report files."""

from .config import ExperimentConfig, parse_config, serialize_config
from .diagnostics import DiagnosticsSummary, normality_diagnostics
from .presets import PRESETS, preset, preset_document, preset_names
from .report import REPORT_FILES, emit_report, load_series_csv
from .scenario import ScenarioError, ScenarioReport, run_estimates, run_scenario

__all__ = [
    "ExperimentConfig",
    "parse_config",
    "serialize_config",
    "DiagnosticsSummary",
    "normality_diagnostics",
    "PRESETS",
    "preset",
    "preset_document",
    "preset_names",
    "REPORT_FILES",
    "emit_report",
    "load_series_csv",
    "ScenarioError",
    "ScenarioReport",
    "run_estimates",
    "run_scenario",
]
