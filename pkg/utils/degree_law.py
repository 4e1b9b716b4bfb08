"""
Theoretical degree laws of linear preferential attachment
Limiting pmf and tail, expected tail counts and the concentration diagnostic
"""

from __future__ import annotations

import logging
import math
from typing import Dict, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field
from scipy.special import gammaln

from utils.pa_graph import DegreeCounts, Model

logger = logging.getLogger(__name__)

ArrayLike = Union[int, float, np.ndarray]


def _check_delta(delta: float) -> None:
    if not np.isfinite(delta) or delta <= -1:
        raise ValueError(f"delta must be > -1, got {delta}")


def _log_tail_ratio(delta: float, k: np.ndarray) -> np.ndarray:
    # log[ Gamma(k+1+d) Gamma(3+2d) / (Gamma(k+3+2d) Gamma(1+d)) ]
    return (gammaln(k + 1.0 + delta) + gammaln(3.0 + 2.0 * delta)
            - gammaln(k + 3.0 + 2.0 * delta) - gammaln(1.0 + delta))


def p_k(delta: float, k: ArrayLike) -> ArrayLike:
    """
    Limiting probability that a node has degree k

    Args:
        delta: Degree offset, > -1
        k: Degree (scalar or array), >= 1

    Returns:
        (2+d) Gamma(k+d) Gamma(3+2d) / (Gamma(k+3+2d) Gamma(1+d))
    """
    _check_delta(delta)
    k_arr = np.asarray(k, dtype=float)
    if np.any(k_arr < 1):
        raise ValueError("k must be >= 1")
    log_p = (math.log(2.0 + delta) + gammaln(k_arr + delta) + gammaln(3.0 + 2.0 * delta)
             - gammaln(k_arr + 3.0 + 2.0 * delta) - gammaln(1.0 + delta))
    result = np.exp(log_p)
    return float(result) if np.ndim(k) == 0 else result


def p_gt_k(delta: float, k: ArrayLike) -> ArrayLike:
    """
    Limiting probability that a node has degree strictly greater than k

    p_{>0} = 1 and p_{>k} ~ c k^{-(2+d)} with c = Gamma(3+2d)/Gamma(1+d).
    """
    _check_delta(delta)
    k_arr = np.asarray(k, dtype=float)
    if np.any(k_arr < 0):
        raise ValueError("k must be >= 0")
    result = np.exp(_log_tail_ratio(delta, k_arr))
    return float(result) if np.ndim(k) == 0 else result


def tail_constant_c(delta: float) -> float:
    """c in p_{>k} ~ c k^{-(2+delta)}"""
    _check_delta(delta)
    return float(np.exp(gammaln(3.0 + 2.0 * delta) - gammaln(1.0 + delta)))


class TheoreticalLaw(BaseModel):
    """Limiting degree law for a given offset"""

    model_config = ConfigDict(frozen=True)

    delta: float = Field(gt=-1.0, allow_inf_nan=False)

    @property
    def tail_index(self) -> float:
        return 2.0 + self.delta

    def pmf(self, k: ArrayLike) -> ArrayLike:
        return p_k(self.delta, k)

    def tail(self, k: ArrayLike) -> ArrayLike:
        return p_gt_k(self.delta, k)

    def asymptote(self, k: ArrayLike) -> ArrayLike:
        return tail_constant_c(self.delta) * np.asarray(k, dtype=float) ** (-self.tail_index)

    def table(self, kmax: int) -> pd.DataFrame:
        ks = np.arange(1, kmax + 1)
        return pd.DataFrame({"k": ks, "p_k": self.pmf(ks), "p_gt_k": self.tail(ks)})


class ExpectedCounts(BaseModel):
    """
    Expected tail counts mu_{>k}(m) for m = 1..n, k = 0..kmax

    Row m-1 of `mu` holds the counts after m steps.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    model: Model
    delta: float
    n: int
    kmax: int
    mu: np.ndarray

    @property
    def epsilon(self) -> np.ndarray:
        """eps_{>k}(m) = mu_{>k}(m) - m p_{>k}"""
        m = np.arange(1, self.n + 1, dtype=float)[:, None]
        return self.mu - m * p_gt_k(self.delta, np.arange(self.kmax + 1))[None, :]

    def mu_gt(self, k: int, m: int) -> float:
        if k > self.kmax:
            raise IndexError(f"k={k} beyond kmax={self.kmax}")
        return float(self.mu[m - 1, k])

    def point_mass(self, m: int) -> np.ndarray:
        """mu_k(m) = mu_{>k-1}(m) - mu_{>k}(m) for k = 1..kmax"""
        row = self.mu[m - 1]
        return row[:-1] - row[1:]

    def to_frame(self, every: int = 1) -> pd.DataFrame:
        rows = np.arange(0, self.n, every)
        if rows[-1] != self.n - 1:
            rows = np.append(rows, self.n - 1)
        eps = self.epsilon
        ks = np.arange(self.kmax + 1)
        return pd.DataFrame({
            "m": np.repeat(rows + 1, len(ks)),
            "k": np.tile(ks, len(rows)),
            "mu_gt_k": self.mu[rows].ravel(),
            "eps_gt_k": eps[rows].ravel(),
        })


def expected_tail_counts(model: Union[Model, str], delta: float, n: int, kmax: int) -> ExpectedCounts:
    """
    Forward recursion for mu_{>k}(m) = E N_{>k}(m)

    Model A: mu_{>k}(m+1) = mu_{>k}(m) + (k+d)/((2+d)m) (mu_{>k-1}(m) - mu_{>k}(m)).
    Model B uses the denominator (2+d)m + 1 + d and adds the self-loop birth
    (1+d)/((2+d)m + 1 + d) to k = 1.
    """
    model = Model(model)
    _check_delta(delta)
    if n < 1:
        raise ValueError("n must be >= 1")
    if kmax < 1:
        raise ValueError("kmax must be >= 1")

    mu = np.zeros((n, kmax + 1))
    mu[0, 0] = 1.0
    mu[0, 1] = 1.0
    rates = np.arange(1, kmax + 1) + delta
    for m in range(1, n):
        prev = mu[m - 1]
        denominator = (2.0 + delta) * m
        if model == Model.B:
            denominator += 1.0 + delta
        row = mu[m]
        row[0] = m + 1
        row[1:] = prev[1:] + rates / denominator * (prev[:-1] - prev[1:])
        if model == Model.B:
            row[1] += (1.0 + delta) / denominator

    return ExpectedCounts(model=model, delta=delta, n=n, kmax=kmax, mu=mu)


def concentration_stat(
    tail_counts: Union[DegreeCounts, np.ndarray, Dict[int, int]],
    n: int,
    delta: float
) -> Tuple[float, float]:
    """
    Realized concentration of tail counts around n p_{>k}

    Args:
        tail_counts: N_{>k}(n) for k = 0..max degree
        n: Number of nodes
        delta: Degree offset

    Returns:
        tuple: (max_k |N_{>k} - n p_{>k}|, that max / (1 + sqrt(n log n)))
    """
    if isinstance(tail_counts, DegreeCounts):
        tail = tail_counts.tail
    elif isinstance(tail_counts, dict):
        tail = np.zeros(max(tail_counts, default=-1) + 1)
        for k, v in tail_counts.items():
            tail[k] = v
    else:
        tail = np.asarray(tail_counts, dtype=float)
    if tail.size == 0:
        raise ValueError("tail_counts is empty")
    ks = np.arange(len(tail))
    gap = float(np.max(np.abs(tail - n * p_gt_k(delta, ks))))
    return gap, gap / (1.0 + math.sqrt(n * math.log(n)))


def tail_constant(delta: float, n_max: int) -> float:
    """
    Empirical C_p(delta): max over n <= n_max of p_{>k} (n+1)^{2+delta}
    at the first k beyond (2+delta)n - delta
    """
    _check_delta(delta)
    ns = np.arange(1, n_max + 1, dtype=float)
    ks = np.floor((2.0 + delta) * ns - delta) + 1.0
    return float(np.max(p_gt_k(delta, ks) * (ns + 1.0) ** (2.0 + delta)))


def epsilon_bound_report(delta: float, n: int, kmax: int) -> Dict[str, float]:
    """sup |eps_{>k}(m)| over the Model A table and the bound max{1, C_p}"""
    counts = expected_tail_counts(Model.A, delta, n, kmax)
    sup_eps = float(np.max(np.abs(counts.epsilon[:, 1:])))
    c_p = tail_constant(delta, n)
    return {
        "delta": delta,
        "n": n,
        "kmax": kmax,
        "sup_abs_eps": sup_eps,
        "c_p": c_p,
        "bound": max(1.0, c_p),
    }
