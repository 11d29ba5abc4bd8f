"""
Runtime configuration.

Defaults live in ``assets/settings.json``; any field can be overridden with
an environment variable ``PERMADD_<FIELD>`` (for example
``PERMADD_MAX_SYNDROMES=65536``). A different JSON file can be selected with
``PERMADD_SETTINGS``.
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, fields, replace
from functools import lru_cache
from pathlib import Path

logger = logging.getLogger(__name__)

ASSETS_DIR = Path(__file__).resolve().parent.parent / "assets"
DEFAULT_SETTINGS_PATH = ASSETS_DIR / "settings.json"
ENV_PREFIX = "PERMADD_"


@dataclass(frozen=True)
class Settings:
    max_field_degree: int = 16
    max_field_order: int = 1 << 16
    max_syndromes: int = 1 << 24
    max_group_order: int = 1024
    max_exhaustive_messages: int = 4096
    verify_workers: int = 1
    log_level: str = "INFO"
    log_file: str = "permadd_runtime.log"


def _from_json(path: Path) -> dict:
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        logger.warning("Settings file not found, using defaults: %s", path)
        return {}
    except json.JSONDecodeError as e:
        logger.error("Ignoring malformed settings file %s: %s", path, e)
        return {}

    values: dict = {}
    for block in ("limits", "behavior"):
        values.update(raw.get(block, {}))
    return values


def _coerce(name: str, value, default):
    if isinstance(default, bool):
        return str(value).lower() in ("1", "true", "yes", "on")
    if isinstance(default, int):
        try:
            return int(value)
        except (TypeError, ValueError):
            logger.error("Setting %s expects an integer, got %r; keeping %r", name, value, default)
            return default
    return str(value)


def settings_from(path: Path | None = None, environ: dict | None = None) -> Settings:
    """Build settings from a JSON file plus environment overrides."""
    environ = os.environ if environ is None else environ
    if path is None:
        path = Path(environ.get(ENV_PREFIX + "SETTINGS", DEFAULT_SETTINGS_PATH))

    base = Settings()
    known = {f.name: getattr(base, f.name) for f in fields(Settings)}
    values = {k: _coerce(k, v, known[k]) for k, v in _from_json(path).items() if k in known}

    for name, default in known.items():
        env_value = environ.get(ENV_PREFIX + name.upper())
        if env_value is not None:
            values[name] = _coerce(name, env_value, default)

    return replace(base, **values)


@lru_cache(maxsize=1)
def load_settings() -> Settings:
    return settings_from()
