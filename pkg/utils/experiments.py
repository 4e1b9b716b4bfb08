"""
Monte Carlo replication harness
Replicated tail-index estimation over (delta, n) cells, QQ data, Hill
consistency and concentration sweeps, and comparison with published means
"""

from __future__ import annotations

import hashlib
import json
import logging
import time
from multiprocessing import Pool
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy import stats

from utils.audit_utils import log_event
from utils.degree_law import concentration_stat
from utils.export_utils import write_degree_file
from utils.pa_graph import Model, PaParams, degree_counts, grow
from utils.seeding import derive_seeds
from utils.tail_estimation import (
    DEFAULT_K_MIN, DegenerateTailError, SortedSample, hill, kn_default, min_distance_select
)
from utils.validation_utils import interpret_relative_error, mean_and_se

logger = logging.getLogger(__name__)

RECORD_COLUMNS = ["rep", "seed", "n", "delta", "k_star", "alpha_hat", "d_min", "max_degree", "wall_time", "error"]
SUMMARY_COLUMNS = ["model", "delta", "n", "reps", "mean_alpha_hat", "se", "failures", "config_hash"]
MIN_QQ_RECORDS = 10

# Published Model B means of alpha_hat over 500 reps, keyed by (delta, n)
PUBLISHED_MEAN_ALPHA_HAT: Dict[Tuple[float, int], float] = {
    (-0.5, 5_000): 1.481, (-0.5, 10_000): 1.484, (-0.5, 50_000): 1.484, (-0.5, 100_000): 1.488,
    (0.0, 5_000): 2.061, (0.0, 10_000): 2.028, (0.0, 50_000): 1.998, (0.0, 100_000): 1.990,
    (0.5, 5_000): 2.602, (0.5, 10_000): 2.557, (0.5, 50_000): 2.507, (0.5, 100_000): 2.494,
    (1.0, 5_000): 3.135, (1.0, 10_000): 3.079, (1.0, 50_000): 3.045, (1.0, 100_000): 2.983,
    (2.0, 5_000): 3.957, (2.0, 10_000): 3.930, (2.0, 50_000): 3.942, (2.0, 100_000): 3.932,
}


class ExperimentConfig(BaseModel):
    """Replication grid; every output records config_hash()"""

    model_config = ConfigDict(frozen=True)

    model: Model = Model.B
    deltas: List[float] = Field(default_factory=lambda: [0.0], min_length=1)
    ns: List[int] = Field(default_factory=lambda: [10_000], min_length=1)
    reps: int = Field(100, ge=1)
    master_seed: int = Field(2019, ge=0)
    k_min: int = Field(DEFAULT_K_MIN, ge=1)
    output_dir: str = "results"
    workers: int = Field(1, ge=1)
    save_degrees: bool = False

    @field_validator("deltas")
    @classmethod
    def _check_deltas(cls, deltas: List[float]) -> List[float]:
        for delta in deltas:
            if not np.isfinite(delta) or delta <= -1:
                raise ValueError(f"delta must be > -1, got {delta}")
        return deltas

    @field_validator("ns")
    @classmethod
    def _check_ns(cls, ns: List[int]) -> List[int]:
        for n in ns:
            if n < 2:
                raise ValueError(f"n must be >= 2, got {n}")
        return ns

    @model_validator(mode="after")
    def _check_tail_room(self) -> "ExperimentConfig":
        smallest = min(self.ns)
        if smallest < self.k_min + 2:
            raise ValueError(f"every n must be >= k_min + 2 = {self.k_min + 2}, got {smallest}")
        return self

    def config_hash(self) -> str:
        """SHA-256 of the fields that determine the results (not output_dir or workers)"""
        payload = self.model_dump(mode="json", exclude={"output_dir", "workers"})
        return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()

    def cells(self) -> List[Tuple[int, float, int]]:
        """(cell index, delta, n), deltas outermost"""
        return [(i * len(self.ns) + j, delta, n)
                for i, delta in enumerate(self.deltas)
                for j, n in enumerate(self.ns)]


class ReplicationRecord(BaseModel):
    """Outcome of one replication; failures keep the error and no estimate"""

    model_config = ConfigDict(frozen=True)

    rep: int
    seed: int
    n: int
    delta: float
    k_star: Optional[int] = None
    alpha_hat: Optional[float] = None
    d_min: Optional[float] = None
    max_degree: int
    wall_time: float = 0.0
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None


class QQData(BaseModel):
    """Standardized estimates against standard normal quantiles"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    frame: pd.DataFrame
    slope: float
    intercept: float
    correlation: float
    degenerate: bool

    def line(self) -> Dict[str, Optional[float]]:
        correlation = None if np.isnan(self.correlation) else self.correlation
        return {"slope": self.slope, "intercept": self.intercept,
                "correlation": correlation, "degenerate": self.degenerate}


class ReplicationResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    config: ExperimentConfig
    records: pd.DataFrame
    summary: pd.DataFrame
    qq: Dict[str, QQData] = Field(default_factory=dict)


def cell_name(model: Model, delta: float, n: int) -> str:
    return f"{Model(model).value}_d{delta:g}_n{n}"


def _replicate_one(task: Tuple) -> Dict:
    model, delta, n, k_min, rep, seed, degree_dir = task
    start = time.perf_counter()
    graph = grow(PaParams(model=model, delta=delta, n=n), seed)
    record = {"rep": rep, "seed": seed, "n": n, "delta": delta, "max_degree": graph.max_degree}
    if degree_dir is not None:
        write_degree_file(graph.degrees, Path(degree_dir) / f"{cell_name(model, delta, n)}_rep{rep}.txt")
    try:
        fit = min_distance_select(SortedSample.from_values(graph.degrees), k_min)
        record.update(k_star=fit.k_star, alpha_hat=fit.alpha_hat, d_min=fit.d_min)
    except DegenerateTailError as e:
        logger.warning("rep %d (seed %d) failed: %s", rep, seed, e)
        record["error"] = str(e)
    record["wall_time"] = time.perf_counter() - start
    logger.debug("rep %d delta=%g n=%d alpha_hat=%s", rep, delta, n, record.get("alpha_hat"))
    return record


def _run_tasks(func, tasks: List[Tuple], workers: int) -> List:
    if workers <= 1 or len(tasks) <= 1:
        return [func(task) for task in tasks]
    with Pool(min(workers, len(tasks))) as pool:
        # imap keeps task order, so results match a sequential run
        return list(pool.imap(func, tasks, chunksize=max(1, len(tasks) // (4 * workers))))


def summarize(records: pd.DataFrame, model: Model, config_hash: str = "") -> pd.DataFrame:
    """Mean alpha_hat and SE per (delta, n) cell; failed reps are excluded and counted"""
    rows = []
    for (delta, n), cell in records.groupby(["delta", "n"], sort=False):
        ok = cell[cell["error"].isna()]
        mean, se = mean_and_se(ok["alpha_hat"].to_numpy(dtype=float))
        rows.append({
            "model": Model(model).value,
            "delta": delta,
            "n": n,
            "reps": len(ok),
            "mean_alpha_hat": mean,
            "se": se,
            "failures": len(cell) - len(ok),
            "config_hash": config_hash,
        })
    return pd.DataFrame(rows, columns=SUMMARY_COLUMNS)


def replicate(config: ExperimentConfig, write: bool = True) -> ReplicationResult:
    """
    Grow, estimate and summarize every replication of every cell

    Rep r of cell c uses seed derive_seeds(master_seed, (c, r)), so records
    do not depend on the worker count.

    Args:
        config: Experiment grid
        write: Persist records.csv, summary.csv, qq_<cell>.csv and the run log

    Returns:
        ReplicationResult: Records, summary and QQ data per cell
    """
    started = time.perf_counter()
    digest = config.config_hash()
    out_dir = Path(config.output_dir)
    degree_dir = str(out_dir / "degrees") if config.save_degrees else None

    tasks = []
    for cell, delta, n in config.cells():
        for rep in range(config.reps):
            tasks.append((config.model, delta, n, config.k_min, rep,
                          derive_seeds(config.master_seed, (cell, rep)), degree_dir))
    logger.info("Replicating %d cells x %d reps (model %s, hash %s)",
                len(config.cells()), config.reps, config.model.value, digest[:12])

    records = [ReplicationRecord(**r) for r in _run_tasks(_replicate_one, tasks, config.workers)]
    records_df = pd.DataFrame([r.model_dump() for r in records], columns=RECORD_COLUMNS)
    summary = summarize(records_df, config.model, digest)

    qq = {}
    for _, delta, n in config.cells():
        cell = records_df[(records_df["delta"] == delta) & (records_df["n"] == n) & records_df["error"].isna()]
        if len(cell) >= MIN_QQ_RECORDS:
            qq[cell_name(config.model, delta, n)] = qq_data(cell["alpha_hat"].to_numpy(dtype=float))

    result = ReplicationResult(config=config, records=records_df, summary=summary, qq=qq)
    if write:
        write_replication(result)
        log_event(out_dir, "replicate", f"{len(records)} replications", {
            "config_hash": digest,
            "cells": len(config.cells()),
            "reps": config.reps,
            "failures": int(summary["failures"].sum()),
            "wall_time": round(time.perf_counter() - started, 3),
        })
    return result


def write_replication(result: ReplicationResult) -> Path:
    out_dir = Path(result.config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    result.records.to_csv(out_dir / "records.csv", index=False)
    result.summary.to_csv(out_dir / "summary.csv", index=False)
    lines = []
    for name, data in result.qq.items():
        data.frame.to_csv(out_dir / f"qq_{name}.csv", index=False)
        lines.append({"cell": name, **data.line()})
    if lines:
        pd.DataFrame(lines).to_csv(out_dir / "qq_lines.csv", index=False)
    logger.info("Wrote records, summary and %d QQ files to %s", len(result.qq), out_dir)
    return out_dir


# ============= QQ data =============

def qq_data(values: np.ndarray) -> QQData:
    """
    Normal QQ pairs at plotting positions (i - 0.5) / R

    The reference line passes through the first and third quartiles of
    the standardized sample and of the normal law. A constant sample is
    flagged degenerate and standardizes to zeros.
    """
    values = np.sort(np.asarray(values, dtype=float))
    size = len(values)
    if size < MIN_QQ_RECORDS:
        raise ValueError(f"need at least {MIN_QQ_RECORDS} records, got {size}")

    quantiles = stats.norm.ppf((np.arange(1, size + 1) - 0.5) / size)
    sd = values.std(ddof=1)
    degenerate = bool(sd == 0 or not np.isfinite(sd))
    standardized = np.zeros(size) if degenerate else (values - values.mean()) / sd

    z1, z3 = stats.norm.ppf([0.25, 0.75])
    q1, q3 = np.quantile(standardized, [0.25, 0.75])
    slope = float((q3 - q1) / (z3 - z1))
    intercept = float(q1 - slope * z1)
    correlation = float("nan") if degenerate else float(np.corrcoef(quantiles, standardized)[0, 1])

    frame = pd.DataFrame({
        "normal_quantile": quantiles,
        "alpha_hat": values,
        "standardized": standardized,
        "reference": intercept + slope * quantiles,
    })
    return QQData(frame=frame, slope=slope, intercept=intercept,
                  correlation=correlation, degenerate=degenerate)


# ============= Sweeps =============

def _hill_one(task: Tuple) -> float:
    delta, n, k, seed = task
    graph = grow(PaParams(model=Model.A, delta=delta, n=n), seed)
    return hill(SortedSample.from_values(graph.degrees), k)


def consistency_sweep(
    deltas: List[float],
    ns: List[int],
    reps: int,
    seed: int,
    model: Model = Model.A,
    workers: int = 1,
    output_dir: Optional[str] = None
) -> pd.DataFrame:
    """
    Mean and SE of H_{k_n,n} at k_n = kn_default(n) for Model A

    Returns:
        pd.DataFrame: delta, n, k_n, reps, mean_hill, se, target, abs_error, verdict
    """
    if Model(model) != Model.A:
        raise ValueError("consistency_sweep covers Model A only")
    if reps < 1:
        raise ValueError("reps must be >= 1")
    started = time.perf_counter()
    rows = []
    for i, delta in enumerate(deltas):
        for j, n in enumerate(ns):
            k_n = kn_default(n)
            cell = i * len(ns) + j
            tasks = [(delta, n, k_n, derive_seeds(seed, (cell, rep))) for rep in range(reps)]
            mean, se = mean_and_se(np.array(_run_tasks(_hill_one, tasks, workers)))
            target = 1.0 / (2.0 + delta)
            rows.append({"delta": delta, "n": n, "k_n": k_n, "reps": reps, "mean_hill": mean,
                         "se": se, "target": target, "abs_error": abs(mean - target),
                         "verdict": interpret_relative_error(mean, target)[0]})
            logger.info("Consistency cell delta=%g n=%d: mean H=%.4f (target %.4f)", delta, n, mean, target)

    table = pd.DataFrame(rows)
    if output_dir is not None:
        Path(output_dir).mkdir(parents=True, exist_ok=True)
        table.to_csv(Path(output_dir) / "consistency.csv", index=False)
        log_event(output_dir, "consistency", f"{len(rows)} cells", {
            "deltas": list(deltas), "ns": list(ns), "reps": reps, "seed": seed,
            "wall_time": round(time.perf_counter() - started, 3),
        })
    return table


def concentration_sweep(delta: float, ns: List[int], reps: int, seed: int) -> pd.DataFrame:
    """Realized max_k |N_{>k}(n) - n p_{>k}| per rep for Model A"""
    rows = []
    for cell, n in enumerate(ns):
        for rep in range(reps):
            graph = grow(PaParams(model=Model.A, delta=delta, n=n), derive_seeds(seed, (cell, rep)))
            gap, normalized = concentration_stat(degree_counts(graph), n, delta)
            rows.append({"n": n, "rep": rep, "gap": gap, "normalized": normalized})
    return pd.DataFrame(rows)


def pareto_sanity(alpha: float, n: int, reps: int, seed: int, k_min: int = DEFAULT_K_MIN) -> pd.DataFrame:
    """Minimum-distance selector on iid Pareto(alpha) samples with scale 1"""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    rows = []
    for rep in range(reps):
        rng = np.random.default_rng(derive_seeds(seed, (rep,)))
        fit = min_distance_select(SortedSample.from_values(rng.pareto(alpha, n) + 1.0), k_min)
        rows.append({"rep": rep, "k_star": fit.k_star, "alpha_hat": fit.alpha_hat, "d_min": fit.d_min})
    return pd.DataFrame(rows)


def compare_with_reference(summary: pd.DataFrame) -> pd.DataFrame:
    """Add the published mean and the deviation for cells that have one"""
    table = summary.copy()
    table["published"] = [PUBLISHED_MEAN_ALPHA_HAT.get((float(d), int(n)), np.nan)
                          for d, n in zip(table["delta"], table["n"])]
    table["deviation"] = table["mean_alpha_hat"] - table["published"]
    table["deviation_se"] = table["deviation"] / table["se"]
    return table
