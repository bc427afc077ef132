"""Tool configuration: a small JSON file selecting the wavelet family and
the missing-data fill tolerances.

Lookup order: explicit --config flag, then the TEXSTEGO_CONFIG environment
variable, then built-in defaults. The file is a flat JSON object; unknown
keys are rejected so typos fail loudly.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

from .errors import UsageError
from .facemodel import ALS_MAX_ITER, ALS_TOL

CONFIG_ENV_VAR = "TEXSTEGO_CONFIG"


@dataclass
class ToolConfig:
    wavelet_family: str = "haar"
    als_tol: float = ALS_TOL
    als_max_iter: int = ALS_MAX_ITER


def load_config(path: str | None = None, env: dict | None = None) -> ToolConfig:
    """Read a ToolConfig; path=None falls back to $TEXSTEGO_CONFIG, then defaults."""
    if env is None:
        env = os.environ
    if path is None:
        path = env.get(CONFIG_ENV_VAR) or None
    if path is None:
        return ToolConfig()
    try:
        with open(path, "rb") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise UsageError(f"config file {path} must hold a JSON object")
    cfg = ToolConfig()
    known = {
        "wavelet_family": str,
        "als_tol": (int, float),
        "als_max_iter": int,
    }
    for k, value in raw.items():
        if k not in known:
            raise UsageError(f"unknown config key {k!r} in {path}")
        if not isinstance(value, known[k]) or isinstance(value, bool):
            raise UsageError(f"config key {k!r} has wrong type {type(value).__name__}")
        setattr(cfg, k, float(value) if k == "als_tol" else value)
    if not cfg.als_tol > 0:
        raise UsageError(f"als_tol must be > 0, got {cfg.als_tol}")
    if cfg.als_max_iter < 1:
        raise UsageError(f"als_max_iter must be >= 1, got {cfg.als_max_iter}")
    if not cfg.wavelet_family:
        raise UsageError("wavelet_family must be a non-empty string")
    return cfg
