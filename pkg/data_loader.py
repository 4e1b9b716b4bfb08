from __future__ import annotations

from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from utils.experiments import ExperimentConfig
from utils.pa_graph import Graph
from utils.settings_utils import get_default_settings, parse_config_text

CONFIG_DIR = Path(__file__).resolve().parent / "config"

PathLike = Union[str, Path]


def _existing(path: PathLike) -> Path:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"File '{path.name}' not found in {path.parent}")
    return path


def read_degree_file(path: PathLike) -> np.ndarray:
    """Load one non-negative integer per line; blank lines and # comments are skipped"""
    path = _existing(path)
    values = []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                value = int(line)
            except ValueError:
                raise ValueError(f"{path.name}:{lineno}: not an integer: {line!r}")
            if value < 0:
                raise ValueError(f"{path.name}:{lineno}: negative degree {value}")
            values.append(value)
    if not values:
        raise ValueError(f"{path.name}: no degrees found")
    return np.array(values, dtype=np.int64)


def read_edge_csv(path: PathLike) -> Graph:
    """Load a `step,source,target` edge history and rebuild the graph"""
    df = pd.read_csv(_existing(path))
    missing = {"source", "target"} - set(df.columns)
    if missing:
        raise ValueError(f"edge file lacks columns: {sorted(missing)}")
    if "step" in df.columns:
        df = df.sort_values("step")
    return Graph.from_edges(df["source"].to_numpy(), df["target"].to_numpy())


def load_experiment_config(path: PathLike, **overrides) -> ExperimentConfig:
    """Default settings, then the key = value file, then non-None overrides"""
    path = _existing(path)
    settings = get_default_settings()
    settings.update(parse_config_text(path.read_text(encoding="utf-8")))
    settings.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(**settings)


def default_config_path() -> Path:
    return CONFIG_DIR / "experiment.conf"
