import json

import pytest

from lrdboot.errors import ConfigError
from lrdboot.experiments.config import parse_config, serialize_config
from lrdboot.experiments.presets import PRESETS, preset, preset_document, preset_names

BASE = {"model": {"family": "poly", "d_exp": 0.3}, "transform": "identity", "n": [1024]}


def doc(**kw):
    d = json.loads(json.dumps(BASE))
    d.update(kw)
    return d


def error_path(document):
    with pytest.raises(ConfigError) as info:
        parse_config(document)
    return info.value.path


def test_minimal_defaults():
    cfg = parse_config(json.dumps(BASE))
    assert cfg.A == 500 and cfg.R == 200
    assert cfg.l_rule.block_length(1024) == 32
    assert cfg.p_rule.blocks(1024, 32) == 32
    assert cfg.grid.size == 101


def test_round_trip():
    cfg = parse_config(doc(l_rule={"kind": "fixed", "l": 16}, x0_quantile=0.6, name="x"))
    again = parse_config(serialize_config(cfg))
    assert again == cfg


@pytest.mark.parametrize(
    "document,path",
    [
        (doc(bogus=1), "bogus"),
        ({"transform": "identity", "n": [10]}, "model"),
        (doc(model={"family": "poly"}), "model.d_exp"),
        (doc(model={"family": "poly", "d_exp": 1.2}), "model.d_exp"),
        (doc(model={"family": "fgn", "hurst": 0.4}), "model.hurst"),
        (doc(model={"family": "poly", "d_exp": 0.3, "extra": 1}), "model.extra"),
        (doc(model={"family": "arma"}), "model.family"),
        (doc(transform="cube"), "transform"),
        (doc(n=[]), "n"),
        (doc(n=[100, 1.5]), "n[1]"),
        (doc(l_rule={"kind": "power", "beta": 1.0}), "l_rule.beta"),
        (doc(l_rule={"kind": "power", "beta": 0.0}), "l_rule.beta"),
        (doc(l_rule={"kind": "fixed"}), "l_rule.l"),
        (doc(l_rule={"kind": "fixed", "l": 1000}), "l_rule"),
        (doc(p_rule={"kind": "fixed", "p": 0}), "p_rule.p"),
        (doc(A=0), "A"),
        (doc(R=True), "R"),
        (doc(grid={"size": 5, "lo": 0.9, "hi": 0.1}), "grid"),
        (doc(m_override=0), "m_override"),
        (doc(x0_quantile=1.0), "x0_quantile"),
        (doc(master_seed=-1), "master_seed"),
        (doc(allow_unguarded_l="yes"), "allow_unguarded_l"),
    ],
)
def test_rejections(document, path):
    assert error_path(document) == path


def test_malformed_json():
    with pytest.raises(ConfigError) as info:
        parse_config("{not json")
    assert info.value.path == "<document>"


def test_growth_guard_override():
    # l = 1000 > 1024^0.9 ~ 512 is accepted only when explicitly allowed
    cfg = parse_config(doc(l_rule={"kind": "fixed", "l": 1000}, allow_unguarded_l=True))
    assert cfg.l_rule.block_length(1024) == 1000
    assert error_path(doc(l_rule={"kind": "fixed", "l": 2000}, allow_unguarded_l=True)) == "l_rule"


def test_power_rule_exact_squares():
    cfg = parse_config(doc(n=[512, 1024, 4096, 8192]))
    assert [cfg.l_rule.block_length(n) for n in cfg.n] == [22, 32, 64, 90]


def test_error_message_has_path():
    with pytest.raises(ConfigError, match=r"^l_rule\.beta: "):
        parse_config(doc(l_rule={"kind": "power", "beta": 2}))


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_presets_parse(name):
    cfg = preset(name)
    assert cfg.name == name
    for n in cfg.n:
        assert cfg.l_rule.block_length(n) <= n**0.9


def test_preset_overrides_and_unknown():
    assert preset("smoke", R=3).R == 3
    assert "smoke" in preset_names()
    with pytest.raises(KeyError):
        preset_document("nope")
