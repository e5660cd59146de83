# Runtime settings for the filling-function tools.
# Values come from the environment; a .env file next to the working directory is
# picked up automatically. Each setting is read when it is accessed, so a bad
# value raises ValueError at the call site instead of at import.
from dotenv import load_dotenv
import logging
import os

load_dotenv()


def _int_setting(name: str, default):
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}. Please fix it in your .env file.")
    if value < 0:
        raise ValueError(f"{name} must be non-negative, got {value}.")
    return value


def _float_setting(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return float(raw)
    except ValueError:
        raise ValueError(f"{name} must be a number, got {raw!r}. Please fix it in your .env file.")


def _level_setting(name: str, default: str) -> str:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    level = raw.strip().upper()
    if not isinstance(logging.getLevelName(level), int):
        raise ValueError(f"{name} must be a logging level such as DEBUG, INFO or WARNING, got {raw!r}. "
                         "Please fix it in your .env file.")
    return level


_READERS = {
    "LOG_LEVEL": lambda: _level_setting("FILLING_LOG_LEVEL", "WARNING"),
    # Default cap for the brute-force filling oracle
    "ORACLE_CAP": lambda: _int_setting("FILLING_ORACLE_CAP", 12),
    # Default budget for exact fillings; None means "search until proven optimal"
    "DEFAULT_BUDGET": lambda: _int_setting("FILLING_BUDGET", None),
    # Slack used when rounding relaxation bounds and testing integrality
    "LP_TOLERANCE": lambda: _float_setting("FILLING_LP_TOLERANCE", 1e-7),
}


def __getattr__(name: str):
    try:
        reader = _READERS[name]
    except KeyError:
        raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
    return reader()
