"""Resource caps, overridable per call or via environment variables."""

import os

# Largest Cayley table, counted in entries (size^2).
DEFAULT_MAX_GROUP_ENTRIES = 10**6
# Largest number of product laws an exhaustive search may evaluate.
DEFAULT_MAX_LAWS = 10**8

ENV_MAX_GROUP = "ANTICONC_MAX_GROUP"
ENV_MAX_LAWS = "ANTICONC_MAX_LAWS"
ENV_PURE = "ANTICONC_PURE"


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from exc
    if value <= 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def max_group_entries(override: int | None = None) -> int:
    return override if override is not None else _env_int(ENV_MAX_GROUP, DEFAULT_MAX_GROUP_ENTRIES)


def max_laws(override: int | None = None) -> int:
    return override if override is not None else _env_int(ENV_MAX_LAWS, DEFAULT_MAX_LAWS)
