"""
Experiment Settings Utilities
Default settings and the key = value config file format
"""

import os
from typing import Any, Dict, List, Union

LOG_LEVEL_ENV = "PA_TAIL_LAB_LOG_LEVEL"

LIST_KEYS = {"deltas", "ns"}
INT_KEYS = {"reps", "master_seed", "k_min", "workers"}
BOOL_KEYS = {"save_degrees"}
STR_KEYS = {"model", "output_dir"}
KNOWN_KEYS = LIST_KEYS | INT_KEYS | BOOL_KEYS | STR_KEYS


def get_default_settings() -> Dict[str, Any]:
    """Desk-scale replication settings"""
    return {
        'model': 'B',
        'deltas': [-0.5, 0.0, 0.5],
        'ns': [10_000],
        'reps': 100,
        'master_seed': 2019,
        'k_min': 5,
        'output_dir': 'results',
        'workers': 1,
        'save_degrees': False,
    }


def get_full_grid_settings() -> Dict[str, Any]:
    """The full published grid: five offsets, four sizes, 500 reps (hours of CPU)"""
    settings = get_default_settings()
    settings.update({
        'deltas': [-0.5, 0.0, 0.5, 1.0, 2.0],
        'ns': [5_000, 10_000, 50_000, 100_000],
        'reps': 500,
    })
    return settings


def get_log_level(default: str = "INFO") -> str:
    return os.environ.get(LOG_LEVEL_ENV, default).upper()


def _parse_bool(key: str, raw: str) -> bool:
    lowered = raw.lower()
    if lowered in ("true", "yes", "1", "on"):
        return True
    if lowered in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"{key}: expected a boolean, got {raw!r}")


def _parse_list(key: str, raw: str) -> List[Union[int, float]]:
    items = [item.strip() for item in raw.split(",") if item.strip()]
    if not items:
        raise ValueError(f"{key}: empty list")
    try:
        if key == "ns":
            return [int(float(item)) if "e" in item.lower() else int(item.replace("_", "")) for item in items]
        return [float(item) for item in items]
    except ValueError:
        raise ValueError(f"{key}: cannot parse {raw!r}")


def parse_config_text(text: str) -> Dict[str, Any]:
    """
    Parse `key = value` lines into a settings dict

    Blank lines and `#` comments are ignored; lists are comma separated.
    Keys not in the experiment settings are rejected.

    Args:
        text: Config file content

    Returns:
        dict: Parsed settings (only the keys present in the text)
    """
    settings: Dict[str, Any] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        if key in LIST_KEYS:
            settings[key] = _parse_list(key, raw)
        elif key in INT_KEYS:
            try:
                settings[key] = int(raw)
            except ValueError:
                raise ValueError(f"line {lineno}: {key} must be an integer, got {raw!r}")
        elif key in BOOL_KEYS:
            settings[key] = _parse_bool(key, raw)
        else:
            settings[key] = raw
    return settings


def format_config_text(settings: Dict[str, Any]) -> str:
    """Inverse of parse_config_text for the known keys"""
    lines = []
    for key in sorted(settings):
        if key not in KNOWN_KEYS:
            continue
        value = settings[key]
        if key in LIST_KEYS:
            value = ", ".join(f"{v:g}" if isinstance(v, float) else str(v) for v in value)
        elif key in BOOL_KEYS:
            value = "true" if value else "false"
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"
