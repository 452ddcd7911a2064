"""
Solver settings with file-first, environment-fallback configuration.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any


APP_NAME = "Octupolar"
CONFIG_ENV_VAR = "OCTUPOLAR_CONFIG"


class ConfigError(ValueError):
    pass


def _default_section_rho() -> list[float]:
    return [round(0.05 * i, 10) for i in range(1, 41)]


def _default_surface_chi() -> list[float]:
    start, stop = -math.pi / 2, -math.pi / 6
    return [start + (stop - start) * i / 24 for i in range(25)]


@dataclass
class SolverConfig:
    grad_tol: float = 1e-12
    accept_tol: float = 1e-9
    max_iters: int = 40
    backtrack_factor: float = 0.5
    backtrack_steps: int = 12
    seed_grid: tuple[int, int] = (64, 128)
    trace_seed_grid: tuple[int, int] = (16, 32)
    dedupe_radius: float = 1e-6
    closed_form_dedupe: float = 1e-7
    closed_form_tol: float = 1e-8
    degeneracy_tol: float = 1e-8
    winding_eig_tol: float = 1e-4
    cluster_radius: float = 3e-4
    winding_radius: float = 1e-3
    winding_samples: int = 32
    unit_tol: float = 1e-10
    stratum_tol: float = 1e-9
    max_failed_fraction: float = 0.5
    symmetry_tol: float = 1e-10
    symmetry_grid: tuple[int, int] = (48, 96)
    bracket_width: float = 1e-6
    k_upper: float = 1.2
    section_rho: list[float] = field(default_factory=_default_section_rho)
    surface_chi: list[float] = field(default_factory=_default_surface_chi)
    workers: int = 1
    log_level: str = "INFO"

    def with_overrides(self, **overrides: Any) -> SolverConfig:
        payload = {f.name: getattr(self, f.name) for f in fields(self)}
        payload.update(overrides)
        return SolverConfig(**payload)


def _coerce(name: str, raw: str, default: Any) -> Any:
    text = raw.strip()
    try:
        if isinstance(default, bool):
            return text.lower() in {"1", "true", "yes", "on"}
        if isinstance(default, int):
            return int(text)
        if isinstance(default, float):
            return float(text)
        if isinstance(default, tuple):
            parts = text.lower().replace(",", "x").split("x")
            return tuple(int(part) for part in parts if part.strip())
        if isinstance(default, list):
            return [float(part) for part in text.replace(",", " ").split()]
    except ValueError as exc:
        raise ConfigError(f"invalid value for {name}: {raw!r}") from exc
    return text


def parse_settings(text: str, base: SolverConfig | None = None) -> SolverConfig:
    cfg = base or SolverConfig()
    known = {f.name for f in fields(SolverConfig)}
    overrides: dict[str, Any] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, value = (part.strip() for part in stripped.split("=", 1))
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown setting {key!r}")
        overrides[key] = _coerce(key, value, getattr(cfg, key))
    return cfg.with_overrides(**overrides)


def resolve_config_path(path: str | Path | None = None) -> Path | None:
    if path:
        return Path(path)
    env_path = os.getenv(CONFIG_ENV_VAR)
    if env_path:
        return Path(env_path)
    return None


def load_settings(path: str | Path | None = None) -> SolverConfig:
    config_path = resolve_config_path(path)
    if config_path is None:
        return SolverConfig()
    try:
        text = config_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {config_path}: {exc}") from exc
    return parse_settings(text)


def dump_settings(cfg: SolverConfig) -> str:
    lines = []
    for f in fields(cfg):
        value = getattr(cfg, f.name)
        if isinstance(value, tuple):
            rendered = "x".join(str(v) for v in value)
        elif isinstance(value, list):
            rendered = " ".join(repr(float(v)) for v in value)
        else:
            rendered = str(value)
        lines.append(f"{f.name} = {rendered}")
    return "\n".join(lines) + "\n"


_default_config: SolverConfig | None = None


def get_default_config() -> SolverConfig:
    global _default_config
    if _default_config is None:
        _default_config = load_settings()
    return _default_config
