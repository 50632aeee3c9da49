"""Configuration management for heatlog."""

import os
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, Any, Optional, Tuple
from dotenv import load_dotenv

from .core.exceptions import ConfigurationError, ParameterError
from .gadget.params import DEFAULT_EPSILON, delta_for, require_epsilon
from .walks.oracle import ORACLE_GUARD

LOG = logging.getLogger(__name__)

FORMATS = ("json", "csv", "table")


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines the content of a report.

    ``threads`` and ``output`` only change how a run is carried out and
    where it is written, so they stay out of the serialized form.
    """

    command: str = ""
    seed: int = 0
    tol: float = 1e-9
    threads: int = 1
    format: str = "json"
    output: Optional[str] = None
    epsilon: float = DEFAULT_EPSILON
    delta: Optional[float] = None
    oracle_guard: int = ORACLE_GUARD
    flags: Tuple[Tuple[str, Any], ...] = field(default_factory=tuple)

    def for_command(
        self,
        command: str,
        epsilon: Optional[float] = None,
        delta: Optional[float] = None,
        **flags: Any,
    ) -> "RunConfig":
        """This run narrowed to one command; epsilon and delta override the defaults when set."""
        epsilon = self.epsilon if epsilon is None else epsilon
        try:
            require_epsilon(epsilon)
        except ParameterError as e:
            raise ConfigurationError(str(e))
        return replace(
            self,
            command=command,
            epsilon=epsilon,
            delta=self.delta if delta is None else delta,
            flags=tuple(sorted(flags.items())),
        )

    @property
    def resolved_delta(self) -> float:
        return delta_for(self.epsilon) if self.delta is None else self.delta

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "seed": self.seed,
            "tol": self.tol,
            "format": self.format,
            "epsilon": self.epsilon,
            "delta": self.resolved_delta,
            "oracle_guard": self.oracle_guard,
            "flags": {name: _plain(value) for name, value in self.flags},
        }


def _plain(value: Any) -> Any:
    if isinstance(value, (tuple, list)):
        return [_plain(v) for v in value]
    return value


def _env_number(name: str, default, cast):
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return cast(raw.strip())
    except ValueError:
        raise ConfigurationError(f"{name} must be a {cast.__name__}, got {raw!r}")


class Config:
    """Configuration manager for heatlog."""

    def __init__(self, env_file: Optional[str] = None):
        """Initialize configuration.

        Args:
            env_file: Path to .env file (optional)
        """
        env_path = Path(env_file) if env_file else Path(".env")
        if env_file and not env_path.exists():
            raise ConfigurationError(f"Configuration file not found: {env_path}")
        if env_path.exists():
            load_dotenv(env_path)
            LOG.debug(f"Loaded configuration from {env_path}")

    def get_run_config(self) -> Dict[str, Any]:
        """Get run defaults from environment."""
        seed = _env_number("HEATLOG_SEED", 0, int)
        tol = _env_number("HEATLOG_TOL", 1e-9, float)
        threads = _env_number("HEATLOG_THREADS", 1, int)
        format_type = os.getenv("HEATLOG_FORMAT", "json").lower()

        if seed < 0:
            raise ConfigurationError(f"HEATLOG_SEED must be nonnegative, got {seed}")
        if tol <= 0:
            raise ConfigurationError(f"HEATLOG_TOL must be positive, got {tol}")
        if threads < 1:
            raise ConfigurationError(f"HEATLOG_THREADS must be at least 1, got {threads}")
        if format_type not in FORMATS:
            raise ConfigurationError(
                f"HEATLOG_FORMAT must be one of {', '.join(FORMATS)}, got {format_type!r}"
            )

        return {
            "seed": seed,
            "tol": tol,
            "threads": threads,
            "format": format_type,
            "output": os.getenv("HEATLOG_OUTPUT") or None,
        }

    def get_numeric_config(self) -> Dict[str, Any]:
        """Get numeric constants from environment."""
        epsilon = _env_number("HEATLOG_EPSILON", DEFAULT_EPSILON, float)
        delta = _env_number("HEATLOG_DELTA", None, float)
        guard = _env_number("HEATLOG_ORACLE_GUARD", ORACLE_GUARD, int)

        try:
            require_epsilon(epsilon)
        except ParameterError as e:
            raise ConfigurationError(f"HEATLOG_EPSILON: {e}")
        if delta is not None and delta <= 0:
            raise ConfigurationError(f"HEATLOG_DELTA must be positive, got {delta}")
        if guard < 1:
            raise ConfigurationError(f"HEATLOG_ORACLE_GUARD must be positive, got {guard}")

        return {"epsilon": epsilon, "delta": delta, "oracle_guard": guard}

    def get_log_config(self) -> Dict[str, Any]:
        """Get logging configuration from environment."""
        level = os.getenv("LOG_LEVEL", "INFO").upper()
        format_type = os.getenv("LOG_FORMAT", "text").lower()

        return {"level": getattr(logging, level, logging.INFO), "format": format_type}

    def run_config(self, **overrides: Any) -> RunConfig:
        """Environment defaults with every non-None override applied on top."""
        values = {**self.get_run_config(), **self.get_numeric_config()}
        values.update({k: v for k, v in overrides.items() if v is not None})
        return RunConfig(**values)

    def setup_logging(self) -> None:
        """Set up logging based on configuration."""
        log_config = self.get_log_config()

        if log_config["format"] == "json":
            log_format = (
                '{"timestamp": "%(asctime)s", "level": "%(levelname)s", '
                '"module": "%(name)s", "message": "%(message)s"}'
            )
        else:
            log_format = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

        logging.basicConfig(
            level=log_config["level"], format=log_format, datefmt="%Y-%m-%d %H:%M:%S"
        )
