"""
Módulo de configuración: límites de ejecución y validación de parámetros.

Values come from the environment so the CLI, the API server and the tests
share one source of defaults; explicit arguments always win.
"""

import logging
import os
import re
from typing import Optional, Tuple

DEFAULT_STEP_LIMIT = 10 ** 8
DEFAULT_MEMORY_SIZE = 2 ** 20
DEFAULT_MAX_CALL_DEPTH = 10 ** 6
DEFAULT_PORT = 8004

MAX_MEMORY_SIZE = 2 ** 31 - 1

_RANGE_PATTERN = re.compile(r"^\s*(\d+)\s*:\s*(\d+)\s*$")


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"Environment variable {name} must be an integer, got {raw!r}")


def get_step_limit() -> int:
    return validate_step_limit(_env_int("ROOPL_STEP_LIMIT", DEFAULT_STEP_LIMIT))


def get_memory_size() -> int:
    return validate_memory_size(_env_int("ROOPL_MEMORY_SIZE", DEFAULT_MEMORY_SIZE))


def get_max_call_depth() -> int:
    depth = _env_int("ROOPL_MAX_CALL_DEPTH", DEFAULT_MAX_CALL_DEPTH)
    if depth < 1:
        raise ValueError(f"ROOPL_MAX_CALL_DEPTH must be positive, got {depth}")
    return depth


def get_runtime_checks() -> bool:
    return os.getenv("ROOPL_RUNTIME_CHECKS", "0").lower() in ("1", "true", "yes", "on")


def get_port() -> int:
    return _env_int("PORT", DEFAULT_PORT)


def get_log_level(default: str = "WARNING") -> int:
    name = os.getenv("ROOPL_LOG_LEVEL", default).upper()
    level = logging.getLevelName(name)
    if not isinstance(level, int):
        raise ValueError(f"Unknown log level {name!r}")
    return level


def validate_step_limit(limit: int) -> int:
    """
    Valida el límite de pasos de la VM.

    Args:
        limit: número máximo de instrucciones a ejecutar
    Returns:
        El mismo límite si es válido
    """
    if limit < 1:
        raise ValueError(f"Step limit must be at least 1, got {limit}")
    return limit


def validate_memory_size(size: int) -> int:
    if size < 16 or size > MAX_MEMORY_SIZE:
        raise ValueError(f"Memory size must be between 16 and {MAX_MEMORY_SIZE} words, got {size}")
    return size


def parse_dump_range(text: Optional[str]) -> Optional[Tuple[int, int]]:
    """
    Convierte 'a:b' en un rango de direcciones [a, b).

    Args:
        text: texto de la forma 'a:b' o None
    Returns:
        Tupla (inicio, fin) o None
    """
    if text is None:
        return None
    match = _RANGE_PATTERN.match(text)
    if not match:
        raise ValueError(f"Memory range must look like 'start:end', got {text!r}")
    start, end = int(match.group(1)), int(match.group(2))
    if end < start:
        raise ValueError(f"Memory range end {end} is before start {start}")
    return start, end


def configure_logging(default: str = "WARNING") -> None:
    logging.basicConfig(
        level=get_log_level(default),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
