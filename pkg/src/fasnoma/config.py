"""Configuration loading for the experiment tools.

A scenario is a flat JSON document whose keys mirror the SystemConfig,
McConfig, and SweepSpec field names; command-line overrides take precedence
over file values, and named presets capture the figure variants reported
with inconsistent parameters in the source material.
"""

from __future__ import annotations

import json
from pathlib import Path

from .channel import SystemConfig
from .montecarlo import McConfig
from .sweep import SweepSpec

__all__ = ["ConfigError", "PRESETS", "load_config", "parse_set_flags"]


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field."""


_SYSTEM_FIELDS = {
    "N": int, "W": float, "sigma2": float, "L": int, "Nc": int, "Ne": int,
    "alpha_c": float, "alpha_e": float, "rho_db": float,
    "d_c": float, "d_e": float, "a": float,
}
_MC_FIELDS = {"seed": int, "trials": int, "chunk_size": int}
_SWEEP_FIELDS = {
    "variable": str, "start": float, "stop": float, "step": float,
    "methods": tuple, "users": tuple, "u_p": int,
}

# Figure scenarios: the caption and body text disagree on (N, W) pairings
# and on the fixed SNR of the power-allocation sweep, so both variants ship.
PRESETS: dict[str, dict] = {
    "fig1a_caption": {
        "N": 2, "W": 5.0, "variable": "rho_db", "start": 0.0, "stop": 60.0,
        "step": 5.0,
    },
    "fig1a_text": {
        "N": 3, "W": 10.0, "variable": "rho_db", "start": 0.0, "stop": 60.0,
        "step": 5.0,
    },
    "fig1b_caption": {
        "N": 3, "W": 10.0, "rho_db": 50.0, "variable": "alpha_c",
        "start": 0.02, "stop": 0.45, "step": 0.01,
    },
    "fig1b_text": {
        "N": 3, "W": 10.0, "rho_db": 40.0, "variable": "alpha_c",
        "start": 0.02, "stop": 0.45, "step": 0.01,
    },
}


def _coerce(key: str, value, target_type):
    try:
        if target_type is tuple:
            if isinstance(value, str):
                return tuple(v.strip() for v in value.split(",") if v.strip())
            return tuple(value)
        if target_type is int:
            out = int(value)
            if isinstance(value, str) or out == value:
                return out
            raise ValueError(value)
        return target_type(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"field {key!r}: cannot parse {value!r}") from exc


def parse_set_flags(pairs) -> dict:
    """Turn repeated 'key=value' strings into a raw override mapping."""
    out = {}
    for item in pairs or ():
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, _, value = item.partition("=")
        out[key.strip()] = value.strip()
    return out


def load_config(path: str | Path | None = None, overrides: dict | None = None,
                preset: str | None = None) -> tuple[SystemConfig, McConfig, SweepSpec]:
    """Merge defaults, an optional preset, a JSON file, and override flags.

    An empty document yields the default scenario.  When only one of the
    power fractions is given the other is set to its complement; giving
    both with an inconsistent sum is an error.
    """
    merged: dict = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(
                f"unknown preset {preset!r}; available: {sorted(PRESETS)}")
        merged.update(PRESETS[preset])
    if path is not None:
        p = Path(path)
        if not p.exists():
            raise ConfigError(f"config file not found: {p}")
        try:
            data = json.loads(p.read_text() or "{}")
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {p}: invalid JSON ({exc})") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"config file {p}: expected a JSON object")
        merged.update(data)
    if overrides:
        merged.update(overrides)

    known = {**_SYSTEM_FIELDS, **_MC_FIELDS, **_SWEEP_FIELDS}
    for key in merged:
        if key not in known:
            raise ConfigError(f"unknown field {key!r}")
    values = {k: _coerce(k, v, known[k]) for k, v in merged.items()}

    if "alpha_c" in values and "alpha_e" not in values:
        values["alpha_e"] = 1.0 - values["alpha_c"]
    elif "alpha_e" in values and "alpha_c" not in values:
        values["alpha_c"] = 1.0 - values["alpha_e"]

    try:
        sys_cfg = SystemConfig(**{k: v for k, v in values.items()
                                  if k in _SYSTEM_FIELDS})
        mc_cfg = McConfig(**{k: v for k, v in values.items() if k in _MC_FIELDS})
        spec = SweepSpec(**{k: v for k, v in values.items() if k in _SWEEP_FIELDS})
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return sys_cfg, mc_cfg, spec
