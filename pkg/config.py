"""
Runtime settings

Defaults, overridden by an optional YAML file, overridden by DIMRED_* environment
variables. The CLI applies its own flags on top with Settings.replace().
"""

import os
from dataclasses import dataclass, fields, replace
from pathlib import Path

import yaml

from errors import ConfigError

TOOL_VERSION = "0.3.0"
ENV_PREFIX = "DIMRED_"


@dataclass(frozen=True)
class Settings:
    log_level: str = "WARNING"
    log_format: str = "text"
    seed: int = 0
    cell_budget: int = 20000
    samples: int = 200
    kmax_margin: int = 1
    random_triples: int = 3

    def replace(self, **changes):
        changes = {k: v for k, v in changes.items() if v is not None}
        return replace(self, **changes)


def _coerce(field_type, raw):
    if field_type in (int, "int"):
        if isinstance(raw, float) and not raw.is_integer():
            raise ValueError(f"{raw} is not an integer")
        return int(raw)
    return str(raw)


def load_settings(path=None, environ=None):
    """Build Settings from defaults, a YAML file and the environment"""
    environ = os.environ if environ is None else environ
    values = {}

    path = path or environ.get(f"{ENV_PREFIX}CONFIG")
    if path:
        config_file = Path(path)
        if not config_file.exists():
            raise ConfigError(f"Config file not found: {config_file}")
        try:
            with open(config_file) as f:
                loaded = yaml.safe_load(f) or {}
        except yaml.YAMLError as exc:
            raise ConfigError(f"Config file {config_file} is not valid YAML: {exc}") from None
        if not isinstance(loaded, dict):
            raise ConfigError(f"Config file {config_file} must hold a mapping")
        values.update(loaded)

    known = {f.name: f.type for f in fields(Settings)}
    unknown = sorted(set(values) - set(known))
    if unknown:
        raise ConfigError(f"Unknown settings: {', '.join(unknown)}")

    for name in known:
        raw = environ.get(f"{ENV_PREFIX}{name.upper()}")
        if raw is not None:
            values[name] = raw

    coerced = {}
    for name, raw in values.items():
        try:
            coerced[name] = _coerce(known[name], raw)
        except (TypeError, ValueError):
            raise ConfigError(f"Bad value for setting {name}: {raw!r}") from None
    return Settings(**coerced)
