"""Scenario definition and its JSON representation.

A config file is one JSON object describing one scenario.  Missing keys fall
back to the defaults below; unknown keys are rejected.  Example::

    {"isd": 1000, "uav_height": 100, "radio": {"tx_power_dbm": 43}}
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any

from .antenna import ArrayConfig, ElementPattern
from .errors import ConfigError, InvalidParameterError
from .optimize.params import GaParams, LocalSearchParams, PsoParams
from .propagation import RadioParams

__all__ = ["Scenario", "load_config", "scenario_from_dict", "scenario_to_dict", "dump_config"]


@dataclass(frozen=True)
class Scenario:
    isd: float = 500.0
    uav_height: float = 200.0
    gue_height: float = 1.5
    grid_spacing: float = 10.0
    gue_spacing: float = 10.0
    phi_dt: float = -6.0
    n_elements: int = 8
    tilt_bounds: tuple = (5.0, 89.0)
    beta: float = 0.5
    seed: int = 0
    radio: RadioParams = field(default_factory=RadioParams)
    element: ElementPattern = field(default_factory=ElementPattern)
    ga: GaParams = field(default_factory=GaParams)
    pso: PsoParams = field(default_factory=PsoParams)
    local_search: LocalSearchParams = field(default_factory=LocalSearchParams)

    def __post_init__(self):
        _validate(self)

    @property
    def array(self) -> ArrayConfig:
        return ArrayConfig(n_elements=self.n_elements)

    def with_overrides(self, **changes) -> "Scenario":
        return replace(self, **changes)


_NESTED = {
    "radio": RadioParams,
    "element": ElementPattern,
    "ga": GaParams,
    "pso": PsoParams,
    "local_search": LocalSearchParams,
}
# seeds come from the scenario, not from the optimizer blocks
_HIDDEN = {"ga": {"seed"}, "pso": {"seed"}}
_INT_KEYS = {"n_elements", "seed", "population", "generations", "elite_count", "max_iters", "swarm", "iterations"}


def _positive(path, value):
    if not (math.isfinite(value) and value > 0):
        raise ConfigError(path, f"must be a positive number, got {value!r}")


def _validate(s: Scenario) -> None:
    for key in ("isd", "uav_height", "gue_height", "grid_spacing", "gue_spacing"):
        _positive(key, getattr(s, key))
    if not -90.0 <= s.phi_dt <= 90.0:
        raise ConfigError("phi_dt", f"must lie in [-90, 90] degrees, got {s.phi_dt!r}")
    if s.n_elements < 1:
        raise ConfigError("n_elements", f"must be at least 1, got {s.n_elements!r}")
    lo, hi = s.tilt_bounds
    if not (-90.0 <= lo < hi <= 90.0):
        raise ConfigError("tilt_bounds", f"need -90 <= low < high <= 90, got {s.tilt_bounds!r}")
    if not 0.0 <= s.beta <= 1.0:
        raise ConfigError("beta", f"must lie in [0, 1], got {s.beta!r}")
    if s.grid_spacing >= s.isd or s.gue_spacing >= s.isd:
        raise ConfigError("grid_spacing", "grid spacing must be smaller than isd")
    if s.seed < 0:
        raise ConfigError("seed", "must be non-negative")


_STR_KEYS = {"nominal"}
_NULLABLE_KEYS = {"init_spread"}


def _coerce(path: str, key: str, value: Any):
    if key in _STR_KEYS:
        if not isinstance(value, str):
            raise ConfigError(path, f"expected a string, got {value!r}")
        return value
    if value is None and key in _NULLABLE_KEYS:
        return None
    if isinstance(value, bool) or value is None:
        raise ConfigError(path, f"expected a number, got {value!r}")
    if key == "tilt_bounds":
        if not (isinstance(value, (list, tuple)) and len(value) == 2):
            raise ConfigError(path, "expected a [low, high] pair")
        return tuple(float(_coerce(path, "", v)) for v in value)
    if not isinstance(value, (int, float)):
        raise ConfigError(path, f"expected a number, got {value!r}")
    if key in _INT_KEYS:
        if float(value) != int(value):
            raise ConfigError(path, f"expected an integer, got {value!r}")
        return int(value)
    return float(value)


def _build(cls, doc: dict, prefix: str, extra_hidden=frozenset()):
    if not isinstance(doc, dict):
        raise ConfigError(prefix, "expected a JSON object")
    known = {f.name: f for f in fields(cls) if f.name not in extra_hidden}
    for key in doc:
        if key not in known:
            raise ConfigError(f"{prefix}.{key}" if prefix else key, "unknown key")
    kwargs = {}
    for key, value in doc.items():
        path = f"{prefix}.{key}" if prefix else key
        if key in _NESTED:
            kwargs[key] = _build(_NESTED[key], value, path, _HIDDEN.get(key, frozenset()))
        else:
            kwargs[key] = _coerce(path, key, value)
    try:
        return cls(**kwargs)
    except ConfigError:
        raise
    except InvalidParameterError as exc:
        raise ConfigError(prefix or cls.__name__, str(exc)) from None


def scenario_from_dict(doc: dict) -> Scenario:
    return _build(Scenario, doc, "")


def scenario_to_dict(s: Scenario) -> dict:
    out = asdict(s)
    out["tilt_bounds"] = list(s.tilt_bounds)
    for block, hidden in _HIDDEN.items():
        for key in hidden:
            out[block].pop(key, None)
    return out


def load_config(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError("", f"cannot read {path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("", f"{path}: malformed JSON ({exc})") from None
    return scenario_from_dict(doc)


def dump_config(s: Scenario) -> str:
    return json.dumps(scenario_to_dict(s), indent=2, sort_keys=True) + "\n"
