"""
Continuous-time embedding of preferential attachment
Branching times, embedded degree evolution, birth and birth-immigration
processes, and the limit-law checks that go with them
"""

from __future__ import annotations

import logging
import math
from typing import Dict, Optional, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field
from scipy import stats

from utils.pa_graph import SEED_MASK, Model, PaParams, run_growth
from utils.seeding import rep_seeds
from utils.tail_estimation import SortedSample, hill
from utils.validation_utils import interpret_pvalue

logger = logging.getLogger(__name__)


def _check_delta(delta: float) -> None:
    if not np.isfinite(delta) or delta <= -1:
        raise ValueError(f"delta must be > -1, got {delta}")


# ============= Branching times =============

class BranchingTimes(BaseModel):
    """
    Jump times T_1 <= ... <= T_n of the aggregate counting process

    T_1 = 0 in both models. Model B also has T_0 = 0, the time at which the
    process of node 2 starts as an immigration candidate.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    model: Model
    delta: float
    times: np.ndarray

    @property
    def n(self) -> int:
        return int(self.times.shape[0])

    @property
    def terminal(self) -> float:
        return float(self.times[-1])

    @property
    def gaps(self) -> np.ndarray:
        return np.diff(self.times)

    @property
    def start_times(self) -> np.ndarray:
        """Time at which each node's process starts (Model A: T_i, Model B: T_{i-1})"""
        if self.model == Model.A:
            return self.times
        return np.concatenate(([0.0], self.times[:-1]))

    def w_hat(self) -> float:
        """n e^{-(2+delta) T_n}"""
        return self.n * math.exp(-(2.0 + self.delta) * self.terminal)


def _gap_rates(model: Model, delta: float, n: int) -> np.ndarray:
    rates = (2.0 + delta) * np.arange(1, n, dtype=float)
    if model == Model.B:
        rates += 1.0 + delta
    return rates


def simulate_branching_times(model: Union[Model, str], delta: float, n: int, seed: int) -> BranchingTimes:
    """
    Sample T_1..T_n from independent exponential gaps

    Model A: T_{i+1} - T_i = A_i / ((2+delta) i)
    Model B: T_{i+1} - T_i = B_i / ((2+delta) i + 1 + delta)

    The exponentials are the first draws of the stream, so the same seed
    gives the same times as `simulate_embedded_degrees`.
    """
    model = Model(model)
    _check_delta(delta)
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed & SEED_MASK)
    exponentials = rng.standard_exponential(n - 1)
    times = np.concatenate(([0.0], np.cumsum(exponentials / _gap_rates(model, delta, n))))
    times.setflags(write=False)
    return BranchingTimes(model=model, delta=delta, times=times)


# ============= Embedded degrees =============

class EmbeddingTrace(BaseModel):
    """Degrees at T_n together with the branching times of one embedded run"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    params: PaParams
    degrees: np.ndarray
    targets: np.ndarray
    branching: BranchingTimes

    @property
    def birth_times(self) -> np.ndarray:
        return self.branching.times

    @property
    def w_hat(self) -> float:
        return self.branching.w_hat()

    @property
    def sigma_hat(self) -> np.ndarray:
        """D_i(n) e^{-(T_n - s_i)} with s_i the start time of node i's process"""
        elapsed = self.branching.terminal - self.branching.start_times
        return self.degrees * np.exp(-elapsed)

    @property
    def max_scaled_degree(self) -> float:
        """max_i D_i(n) / n^{1/(2+delta)}"""
        return float(self.degrees.max()) / self.params.n ** (1.0 / self.params.tail_index)

    @property
    def max_limit_point(self) -> float:
        """
        max_i sigma_hat_i e^{-s_i} / w_hat^{1/(2+delta)}

        Coincides with `max_scaled_degree` on a single trace; read at a larger n
        it stands in for the limit the scaled maximum degree converges to.
        """
        points = self.sigma_hat * np.exp(-self.branching.start_times)
        return float(points.max()) / self.w_hat ** (1.0 / self.params.tail_index)


def simulate_embedded_degrees(model: Union[Model, str], delta: float, n: int, seed: int) -> EmbeddingTrace:
    """
    Run the competing-exponential dynamics up to the n-th birth

    Each node carries rate D_i + delta (plus the candidate's 1 + delta in
    Model B); the next event comes after an exponential gap with the total
    rate and falls on a node chosen proportionally to its rate.
    """
    params = PaParams(model=Model(model), delta=delta, n=n)
    rng = np.random.default_rng(seed & SEED_MASK)
    exponentials = rng.standard_exponential(n - 1)
    uniforms = rng.random(n - 1)
    targets, degrees, times = run_growth(params, uniforms, exponentials)

    if int(degrees.sum()) != 2 * n:
        raise RuntimeError(f"embedded degree sum {degrees.sum()} != 2n")
    for array in (targets, degrees, times):
        array.setflags(write=False)
    return EmbeddingTrace(
        params=params,
        degrees=degrees,
        targets=targets,
        branching=BranchingTimes(model=params.model, delta=delta, times=times),
    )


# ============= Birth processes =============

class BirthProcessSample(BaseModel):
    """Draws of a Yule process zeta(t) started at 1, with latent W when known"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    lam: float = Field(gt=0)
    t: float = Field(ge=0)
    count: np.ndarray
    latent: Optional[np.ndarray] = None

    @property
    def scaled(self) -> np.ndarray:
        """e^{-lambda t} zeta(t)"""
        return self.count * math.exp(-self.lam * self.t)


def _check_rate(lam: float, t: float) -> None:
    if lam <= 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")


def birth_process_mixed_poisson(lam: float, t: float, seed: int, size: int = 1) -> BirthProcessSample:
    """zeta(t) = 1 + Poisson(W (e^{lambda t} - 1)) with W ~ Exp(1)"""
    _check_rate(lam, t)
    rng = np.random.default_rng(seed & SEED_MASK)
    latent = rng.standard_exponential(size)
    count = 1 + rng.poisson(latent * math.expm1(lam * t))
    return BirthProcessSample(lam=lam, t=t, count=count, latent=latent)


def birth_process_ctmc(lam: float, t: float, seed: int, size: int = 1) -> BirthProcessSample:
    """
    Event-by-event simulation of the pure birth process with rate lambda i

    All paths advance together; a path stops once its next jump falls
    beyond t.
    """
    _check_rate(lam, t)
    rng = np.random.default_rng(seed & SEED_MASK)
    count = np.ones(size, dtype=np.int64)
    clock = np.zeros(size)
    active = np.ones(size, dtype=bool)
    while active.any():
        idx = np.flatnonzero(active)
        clock[idx] += rng.standard_exponential(idx.size) / (lam * count[idx])
        jumped = clock[idx] <= t
        count[idx[jumped]] += 1
        active[idx[~jumped]] = False
    return BirthProcessSample(lam=lam, t=t, count=count)


def bi_shot_noise(theta: float, lam: float, t: float, seed: int, size: int = 1) -> np.ndarray:
    """
    Birth-immigration counts BI(t) as a shot noise

    Immigrants arrive as a Poisson process with rate theta on [0, t]; each
    starts a Yule process at 1, whose count after time s is geometric with
    success probability e^{-lambda s}.

    Returns:
        np.ndarray: `size` independent draws of BI(t)
    """
    if theta < 0:
        raise ValueError(f"theta must be >= 0, got {theta}")
    _check_rate(lam, t)
    rng = np.random.default_rng(seed & SEED_MASK)
    arrivals = rng.poisson(theta * t, size=size)
    total = int(arrivals.sum())
    if total == 0:
        return np.zeros(size, dtype=np.int64)
    owner = np.repeat(np.arange(size), arrivals)
    ages = t - rng.uniform(0.0, t, size=total)
    offspring = rng.geometric(np.exp(-lam * ages))
    return np.bincount(owner, weights=offspring, minlength=size).astype(np.int64)


# ============= Hill on branching points =============

def hill_on_branching_points(delta: float, n: int, k: int, seed: int, method: str = "telescoped") -> float:
    """
    Hill estimator applied to Y_i = e^{-T_i} of Model A

    Args:
        delta: Degree offset
        n: Number of branching times
        k: Number of upper order statistics, <= n - 1
        seed: Stream seed
        method: 'telescoped' for (1/k) sum_l l (T_{l+1} - T_l), 'direct'
            for the Hill estimator on the Y_i themselves

    Returns:
        float: H, close to 1/(2+delta) for large k
    """
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must lie in [1, {n - 1}], got {k}")
    times = simulate_branching_times(Model.A, delta, n, seed).times
    if method == "telescoped":
        gaps = np.diff(times[: k + 1])
        return float(np.dot(np.arange(1, k + 1), gaps) / k)
    if method == "direct":
        return hill(SortedSample(values=np.exp(-times)), k)
    raise ValueError(f"unknown method: {method}")


# ============= Limit laws =============

def w_limit_law(model: Union[Model, str], delta: float):
    """
    Limit of n e^{-(2+delta) T_n}

    W_A ~ Exp(1). W_B ~ Gamma((3+2delta)/(2+delta), 1): the Model B gaps have
    rates (2+delta)(i + c) with c = (1+delta)/(2+delta), so
    n E e^{-(2+delta) T_n} = n (1+c)/(n+c) -> 1 + c.
    """
    _check_delta(delta)
    if Model(model) == Model.A:
        return stats.expon()
    return stats.gamma((3.0 + 2.0 * delta) / (2.0 + delta))


def sigma_limit_law(delta: float, node: int = 1):
    """sigma_1 ~ Gamma(2+delta, 1); sigma_i ~ Gamma(1+delta, 1) for i >= 2"""
    _check_delta(delta)
    if node < 1:
        raise ValueError("node labels start at 1")
    return stats.gamma(2.0 + delta if node == 1 else 1.0 + delta)


def embedding_batch(model: Union[Model, str], delta: float, n: int, reps: int, seed: int) -> pd.DataFrame:
    """Per-rep terminal statistics of independent embedded runs"""
    rows = []
    for rep, rep_seed in enumerate(rep_seeds(seed, reps)):
        trace = simulate_embedded_degrees(model, delta, n, rep_seed)
        rows.append({
            "rep": rep,
            "T_n": trace.branching.terminal,
            "w_hat": trace.w_hat,
            "sigma_hat_1": float(trace.sigma_hat[0]),
            "max_scaled_degree": trace.max_scaled_degree,
        })
    logger.info("Embedding batch: model %s delta=%.3f n=%d reps=%d", Model(model).value, delta, n, reps)
    return pd.DataFrame(rows, columns=["rep", "T_n", "w_hat", "sigma_hat_1", "max_scaled_degree"])


def limit_law_checks(table: pd.DataFrame, model: Union[Model, str], delta: float, level: float = 0.01) -> pd.DataFrame:
    """KS tests of w_hat and sigma_hat_1 against their limit laws"""
    laws: Dict[str, object] = {
        "w_hat": w_limit_law(model, delta),
        "sigma_hat_1": sigma_limit_law(delta, 1),
    }
    rows = []
    for column, law in laws.items():
        result = stats.kstest(table[column].to_numpy(), law.cdf)
        rows.append({
            "statistic": column,
            "law": f"{law.dist.name}{tuple(round(a, 4) for a in law.args)}",
            "ks": float(result.statistic),
            "p_value": float(result.pvalue),
            "passed": bool(result.pvalue >= level),
            "verdict": interpret_pvalue(float(result.pvalue), level)[0],
        })
    return pd.DataFrame(rows)
