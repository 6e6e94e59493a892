"""Built-in scenarios."""

from __future__ import annotations

import copy

from .config import ExperimentConfig, parse_config

PRESETS: dict[str, dict] = {
    "smoke": {
        "model": {"family": "poly", "d_exp": 0.3},
        "transform": "identity",
        "n": [64],
        "l_rule": {"kind": "power", "beta": 0.5},
        "A": 1,
        "R": 1,
        "master_seed": 1,
    },
    "identity-m1": {
        "model": {"family": "poly", "d_exp": 0.3},
        "transform": "identity",
        "n": [2048, 8192],
        "l_rule": {"kind": "fixed", "l": 64},
        "A": 500,
        "R": 20,
        "master_seed": 20261016,
    },
    "hermite2-m2": {
        "model": {"family": "poly", "d_exp": 0.3},
        "transform": "hermite:2",
        "n": [2048, 8192],
        "l_rule": {"kind": "fixed", "l": 64},
        "A": 500,
        "R": 500,
        "x0_quantile": 0.7,
        "master_seed": 20261016,
    },
    "square-m2": {
        "model": {"family": "poly", "d_exp": 0.3},
        "transform": "square",
        "n": [2048, 8192],
        "l_rule": {"kind": "fixed", "l": 64},
        "A": 500,
        "R": 50,
        "x0_quantile": 0.7,
        "master_seed": 20261016,
    },
    "fgn-identity": {
        "model": {"family": "fgn", "hurst": 0.8},
        "transform": "identity",
        "n": [2048, 8192],
        "l_rule": {"kind": "power", "beta": 0.5},
        "A": 500,
        "R": 50,
        "master_seed": 20261016,
    },
}


def preset_names() -> list[str]:
    return sorted(PRESETS)


def preset_document(name: str, **overrides) -> dict:
    """The raw JSON document of preset ``name`` with top-level ``overrides``."""
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; choose from {preset_names()}")
    doc = copy.deepcopy(PRESETS[name])
    doc["name"] = name
    doc.update(overrides)
    return doc


def preset(name: str, **overrides) -> ExperimentConfig:
    return parse_config(preset_document(name, **overrides))
