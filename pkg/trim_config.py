"""
Configuration for the trimming toolkit.

Defaults live in trim_config.json; environment variables (optionally from
a .env file) override the file, and command-line flags override both.
"""
import os
import json
import logging
from dataclasses import dataclass, asdict, replace
from typing import Any, Dict, Optional

import psutil

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = "trim_config.json"

_ENV_OVERRIDES = {
    "TRIM_WORKERS": ("workers", int),
    "TRIM_CHUNK_SIZE": ("chunk_size", int),
    "TRIM_REPETITIONS": ("repetitions", int),
    "TRIM_SEED": ("seed", int),
    "TRIM_LOG_LEVEL": ("log_level", str),
}


class ConfigurationError(ValueError):
    """Invalid engine, harness or CLI configuration."""
    pass


@dataclass
class TrimConfig:
    """Toolkit-wide defaults."""
    workers: Optional[int] = None
    chunk_size: int = 4096
    repetitions: int = 50
    seed: int = 42
    log_level: str = "INFO"
    output_format: str = "csv"
    verify_max_vertices: int = 1_000_000

    def resolved_workers(self) -> int:
        """Configured worker count, or the machine's logical core count."""
        if self.workers is not None:
            return self.workers
        return psutil.cpu_count(logical=True) or 1

    def validate(self) -> "TrimConfig":
        if self.workers is not None and self.workers < 1:
            raise ConfigurationError(f"workers must be >= 1, got {self.workers}")
        if self.chunk_size < 1:
            raise ConfigurationError(f"chunk_size must be >= 1, got {self.chunk_size}")
        if self.repetitions < 1:
            raise ConfigurationError(f"repetitions must be >= 1, got {self.repetitions}")
        if self.output_format not in ("csv", "json"):
            raise ConfigurationError(f"output_format must be csv or json, got {self.output_format!r}")
        return self

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def load_config(config_path: str = DEFAULT_CONFIG_PATH, environ: Optional[Dict[str, str]] = None) -> TrimConfig:
    """Read the "trim" section of a JSON config file, then apply TRIM_* overrides."""
    data: Dict[str, Any] = {}
    try:
        if os.path.exists(config_path):
            with open(config_path, "r", encoding="utf-8") as f:
                data = json.load(f).get("trim", {})
        else:
            logger.warning(f"Config file {config_path} not found, using defaults")
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigurationError(f"Error loading config {config_path}: {e}") from e

    known = TrimConfig.__dataclass_fields__
    unknown = set(data) - set(known)
    if unknown:
        logger.warning(f"Ignoring unknown config keys: {', '.join(sorted(unknown))}")
    config = TrimConfig(**{k: v for k, v in data.items() if k in known})

    env = os.environ if environ is None else environ
    overrides: Dict[str, Any] = {}
    for var, (field_name, cast) in _ENV_OVERRIDES.items():
        raw = env.get(var)
        if raw is None or raw == "":
            continue
        try:
            overrides[field_name] = cast(raw)
        except ValueError:
            raise ConfigurationError(f"{var}={raw!r} is not a valid {cast.__name__}")
    if overrides:
        logger.debug(f"Environment overrides: {overrides}")
        config = replace(config, **overrides)
    return config.validate()


def setup_logging(level: str = "INFO"):
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )
