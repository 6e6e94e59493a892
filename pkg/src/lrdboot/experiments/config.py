"""Experiment configuration: JSON in, validated dataclass out."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from ..errors import ConfigError
from ..hermite import Transform
from ..lrd_gauss import CovarianceModel

__all__ = ["ExperimentConfig", "LRule", "PRule", "GridSpec", "parse_config", "serialize_config"]

GUARD_EXPONENT = 0.9


@dataclass(frozen=True)
class LRule:
    """``fixed``: constant ``l``. ``power``: ``l = floor(n ** beta)``."""

    kind: str = "power"
    l: int | None = None
    beta: float | None = 0.5

    def block_length(self, n: int) -> int:
        if self.kind == "fixed":
            return int(self.l)
        # guard against n ** beta landing a hair below an integer
        return max(1, int(math.floor(n**self.beta + 1e-9)))

    def to_dict(self):
        if self.kind == "fixed":
            return {"kind": "fixed", "l": self.l}
        return {"kind": "power", "beta": self.beta}


@dataclass(frozen=True)
class PRule:
    """``default``: ``p = n // l``. ``fixed``: constant ``p``."""

    kind: str = "default"
    p: int | None = None

    def blocks(self, n: int, l: int) -> int:
        return n // l if self.kind == "default" else int(self.p)

    def to_dict(self):
        return {"kind": "default"} if self.kind == "default" else {"kind": "fixed", "p": self.p}


@dataclass(frozen=True)
class GridSpec:
    """``size`` quantile levels of ``F`` equispaced on ``[lo, hi]``."""

    size: int = 101
    lo: float = 0.01
    hi: float = 0.99

    def to_dict(self):
        return {"size": self.size, "lo": self.lo, "hi": self.hi}


@dataclass(frozen=True)
class ExperimentConfig:
    model: CovarianceModel
    transform: Transform
    n: tuple
    l_rule: LRule = field(default_factory=LRule)
    p_rule: PRule = field(default_factory=PRule)
    A: int = 500
    R: int = 200
    grid: GridSpec = field(default_factory=GridSpec)
    m_override: int | None = None
    x0_quantile: float | None = None
    master_seed: int = 0
    output_dir: str | None = None
    allow_unguarded_l: bool = False
    data: str | None = None
    name: str | None = None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "model": self.model.to_dict(),
            "transform": self.transform.keyword,
            "m_override": self.m_override,
            "n": list(self.n),
            "l_rule": self.l_rule.to_dict(),
            "p_rule": self.p_rule.to_dict(),
            "A": self.A,
            "R": self.R,
            "grid": self.grid.to_dict(),
            "x0_quantile": self.x0_quantile,
            "master_seed": self.master_seed,
            "output_dir": self.output_dir,
            "allow_unguarded_l": self.allow_unguarded_l,
            "data": self.data,
        }


_TOP_KEYS = {
    "name", "model", "transform", "m_override", "n", "l_rule", "p_rule", "A", "R",
    "grid", "x0_quantile", "master_seed", "output_dir", "allow_unguarded_l", "data",
}
_REQUIRED = {"model", "transform", "n"}


def _unknown(obj: dict, allowed: set, where: str):
    extra = sorted(set(obj) - allowed)
    if extra:
        raise ConfigError(f"{where}{extra[0]}" if where else extra[0], "unknown key")


def _int(value, path: str, lo: int | None = None, hi: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(path, f"expected an integer, got {value!r}")
    if lo is not None and value < lo:
        raise ConfigError(path, f"must be >= {lo}")
    if hi is not None and value > hi:
        raise ConfigError(path, f"must be <= {hi}")
    return value


def _real(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(path, f"expected a finite number, got {value!r}")
    return float(value)


def _object(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(path, "expected an object")
    return value


def _model(obj) -> CovarianceModel:
    obj = _object(obj, "model")
    family = obj.get("family")
    if family == "fgn":
        _unknown(obj, {"family", "hurst"}, "model.")
        if "hurst" not in obj:
            raise ConfigError("model.hurst", "required for family fgn")
        h = _real(obj["hurst"], "model.hurst")
        if not 0.5 < h < 1.0:
            raise ConfigError("model.hurst", "must lie in (0.5, 1)")
        return CovarianceModel.fgn(h)
    if family == "poly":
        _unknown(obj, {"family", "d_exp"}, "model.")
        if "d_exp" not in obj:
            raise ConfigError("model.d_exp", "required for family poly")
        d = _real(obj["d_exp"], "model.d_exp")
        if not 0.0 < d < 1.0:
            raise ConfigError("model.d_exp", "must lie in (0, 1)")
        return CovarianceModel.poly(d)
    raise ConfigError("model.family", f"expected 'fgn' or 'poly', got {family!r}")


def _l_rule(obj) -> LRule:
    obj = _object(obj, "l_rule")
    kind = obj.get("kind")
    if kind == "fixed":
        _unknown(obj, {"kind", "l"}, "l_rule.")
        if "l" not in obj:
            raise ConfigError("l_rule.l", "required for kind fixed")
        return LRule("fixed", _int(obj["l"], "l_rule.l", lo=1), None)
    if kind == "power":
        _unknown(obj, {"kind", "beta"}, "l_rule.")
        if "beta" not in obj:
            raise ConfigError("l_rule.beta", "required for kind power")
        beta = _real(obj["beta"], "l_rule.beta")
        if not 0.0 < beta < 1.0:
            raise ConfigError("l_rule.beta", f"must lie in (0, 1), got {beta}")
        return LRule("power", None, beta)
    raise ConfigError("l_rule.kind", f"expected 'fixed' or 'power', got {kind!r}")


def _p_rule(obj) -> PRule:
    obj = _object(obj, "p_rule")
    kind = obj.get("kind")
    if kind == "default":
        _unknown(obj, {"kind"}, "p_rule.")
        return PRule()
    if kind == "fixed":
        _unknown(obj, {"kind", "p"}, "p_rule.")
        if "p" not in obj:
            raise ConfigError("p_rule.p", "required for kind fixed")
        return PRule("fixed", _int(obj["p"], "p_rule.p", lo=1))
    raise ConfigError("p_rule.kind", f"expected 'default' or 'fixed', got {kind!r}")


def _grid(obj) -> GridSpec:
    obj = _object(obj, "grid")
    _unknown(obj, {"size", "lo", "hi"}, "grid.")
    defaults = GridSpec()
    size = _int(obj.get("size", defaults.size), "grid.size", lo=1)
    lo = _real(obj.get("lo", defaults.lo), "grid.lo")
    hi = _real(obj.get("hi", defaults.hi), "grid.hi")
    if not 0.0 < lo <= hi < 1.0:
        raise ConfigError("grid", "need 0 < lo <= hi < 1")
    if size > 1 and lo == hi:
        raise ConfigError("grid", "lo == hi only allowed with size 1")
    return GridSpec(size, lo, hi)


def _from_dict(doc: dict) -> ExperimentConfig:
    _unknown(doc, _TOP_KEYS, "")
    for key in sorted(_REQUIRED - set(doc)):
        raise ConfigError(key, "required")

    model = _model(doc["model"])
    if not isinstance(doc["transform"], str):
        raise ConfigError("transform", "expected a keyword string")
    try:
        transform = Transform.from_keyword(doc["transform"])
    except ValueError as exc:
        raise ConfigError("transform", str(exc)) from None

    ns = doc["n"]
    if not isinstance(ns, list) or not ns:
        raise ConfigError("n", "expected a non-empty list of integers")
    ns = tuple(_int(v, f"n[{k}]", lo=2) for k, v in enumerate(ns))

    l_rule = _l_rule(doc["l_rule"]) if "l_rule" in doc else LRule()
    p_rule = _p_rule(doc["p_rule"]) if "p_rule" in doc else PRule()
    allow = doc.get("allow_unguarded_l", False)
    if not isinstance(allow, bool):
        raise ConfigError("allow_unguarded_l", "expected a boolean")
    for k, n in enumerate(ns):
        l = l_rule.block_length(n)
        if l > n:
            raise ConfigError("l_rule", f"block length {l} exceeds n[{k}] = {n}")
        if not allow and l > n**GUARD_EXPONENT:
            raise ConfigError(
                "l_rule", f"block length {l} exceeds n^{GUARD_EXPONENT} for n = {n}"
            )
        if p_rule.blocks(n, l) < 1:
            raise ConfigError("p_rule", f"no complete block fits for n = {n}")

    m_override = doc.get("m_override")
    if m_override is not None:
        m_override = _int(m_override, "m_override", lo=1, hi=30)
    x0q = doc.get("x0_quantile")
    if x0q is not None:
        x0q = _real(x0q, "x0_quantile")
        if not 0.0 < x0q < 1.0:
            raise ConfigError("x0_quantile", "must lie in (0, 1)")
    for key in ("output_dir", "data", "name"):
        if doc.get(key) is not None and not isinstance(doc[key], str):
            raise ConfigError(key, "expected a string")

    return ExperimentConfig(
        model=model,
        transform=transform,
        n=ns,
        l_rule=l_rule,
        p_rule=p_rule,
        A=_int(doc.get("A", 500), "A", lo=1),
        R=_int(doc.get("R", 200), "R", lo=1),
        grid=_grid(doc["grid"]) if "grid" in doc else GridSpec(),
        m_override=m_override,
        x0_quantile=x0q,
        master_seed=_int(doc.get("master_seed", 0), "master_seed", lo=0, hi=2**64 - 1),
        output_dir=doc.get("output_dir"),
        allow_unguarded_l=allow,
        data=doc.get("data"),
        name=doc.get("name"),
    )


def parse_config(text: str | dict) -> ExperimentConfig:
    """Parse and validate a JSON document (or an already-decoded dict).

    Raises
    ------
    ConfigError
        With the dotted field path and the reason.
    """
    if isinstance(text, dict):
        doc = text
    else:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError("<document>", f"malformed JSON: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ConfigError("<document>", "top level must be an object")
    return _from_dict(doc)


def serialize_config(config: ExperimentConfig) -> str:
    return json.dumps(config.to_dict(), indent=2, sort_keys=True) + "\n"
