"""Numeric guards.  Precedence: explicit argument > override > OVERTAKE_* variable > default."""
import os
from contextlib import contextmanager

DEFAULTS = {
    "ceiling_bits": 1 << 24,
    "max_states": 4,
    "input_budget": 256,
    "search_budget": 4096,
}

_overrides: dict[str, int] = {}


def setting(name: str, value: int | None = None) -> int:
    if value is not None:
        return value
    if name in _overrides:
        return _overrides[name]
    env = os.environ.get("OVERTAKE_" + name.upper())
    if env is not None:
        return int(env)
    return DEFAULTS[name]


@contextmanager
def overrides(**values):
    """Temporarily pin settings (used for command-line flags)."""
    unknown = set(values) - set(DEFAULTS)
    if unknown:
        raise KeyError(f"unknown settings {sorted(unknown)}")
    saved = dict(_overrides)
    _overrides.update({k: v for k, v in values.items() if v is not None})
    try:
        yield
    finally:
        _overrides.clear()
        _overrides.update(saved)
