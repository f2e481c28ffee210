"""
config.py - Budgets, defaults and statistical thresholds

A single frozen Settings object carries every tunable the library uses.
Operations take an explicit `settings=` keyword that defaults to DEFAULT_SETTINGS,
so nothing is configured through hidden global state.

Usage:
    from forestlab.config import DEFAULT_SETTINGS
    tight = DEFAULT_SETTINGS.replace(vertex_budget=10_000)
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .errors import ConfigError


@dataclass(frozen=True)
class Settings:
    vertex_budget: int = 2**27
    step_budget: int = 10**7
    horizon: int = 10**5
    attempt_cap: int = 10**4
    chi2_significance: float = 1e-3
    min_expected_count: int = 100
    bootstrap_resamples: int = 10**3
    replicas: int = 10**5
    censoring_warn_rate: float = 0.01
    ray_margin: float = 0.10
    dense_solver_cutoff: int = 2000
    cg_rtol: float = 1e-10
    enumeration_edge_cap: int = 24
    exact_count_cap: int = 200
    heat_kernel_exact_work: int = 10**9
    heat_kernel_mc_samples: int = 10**5
    separation_tail: float = 0.5
    require_separation: bool = True

    def replace(self, **overrides: Any) -> Settings:
        known = {f.name for f in dataclasses.fields(self)}
        for key in overrides:
            if key not in known:
                raise ConfigError(key, "unknown setting")
        return dataclasses.replace(self, **overrides)


DEFAULT_SETTINGS = Settings()


def default_settings() -> Settings:
    return DEFAULT_SETTINGS


def load_config(path: str | Path) -> dict[str, Any]:
    """Read a JSON config file; the top level must be an object."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError as exc:
        raise ConfigError("config", f"no such file {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"{path} is not valid JSON ({exc.msg}, line {exc.lineno})") from exc
    if not isinstance(data, dict):
        raise ConfigError("config", f"{path} must contain a JSON object")
    return data
