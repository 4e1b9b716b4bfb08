"""
Tail index estimation for power-law data
Hill estimator, tail empirical measure, scaling function b(.) and the
minimum-distance (KS) threshold selector
"""

from __future__ import annotations

import logging
import math
from typing import Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, field_validator
from scipy.special import gammaln

logger = logging.getLogger(__name__)

DEFAULT_K_MIN = 5


class DegenerateTailError(ValueError):
    """Raised when the upper order statistics carry no tail information"""


class SortedSample(BaseModel):
    """Sample sorted in descending order: Z_(1) >= Z_(2) >= ... >= Z_(n)"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    values: np.ndarray

    @field_validator("values")
    @classmethod
    def _check_order(cls, values: np.ndarray) -> np.ndarray:
        values = np.array(values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("sample must be a non-empty 1-D array")
        if not np.all(np.isfinite(values)):
            raise ValueError("sample contains non-finite values")
        if np.any(values[:-1] < values[1:]):
            raise ValueError("sample must be sorted in descending order")
        values.setflags(write=False)
        return values

    @classmethod
    def from_values(cls, values) -> "SortedSample":
        return cls(values=np.sort(np.asarray(values, dtype=float))[::-1])

    @property
    def n(self) -> int:
        return int(self.values.shape[0])

    def scaled(self, factor: float) -> "SortedSample":
        if factor <= 0:
            raise ValueError("scale factor must be positive")
        return SortedSample(values=self.values * factor)


def _check_k(sample: SortedSample, k: int) -> None:
    if not 1 <= k <= sample.n - 1:
        raise ValueError(f"k must lie in [1, {sample.n - 1}], got {k}")
    if sample.values[k] <= 0:
        raise ValueError("threshold order statistic must be positive")


def hill(sample: SortedSample, k: int) -> float:
    """H_{k,n} = (1/k) sum_{i<=k} log(Z_(i) / Z_(k+1))"""
    _check_k(sample, k)
    z = sample.values
    return float(np.mean(np.log(z[:k] / z[k])))


def hill_curve(sample: SortedSample) -> np.ndarray:
    """H_{k,n} for k = 1..n-1 (entry k-1)"""
    z = sample.values
    if z[-1] <= 0:
        raise ValueError("hill_curve needs a strictly positive sample")
    logs = np.log(z)
    ks = np.arange(1, len(z))
    return np.cumsum(logs)[:-1] / ks - logs[1:]


def alpha_hat(sample: SortedSample, k: int) -> float:
    """Tail index estimate 1 / H_{k,n}"""
    h = hill(sample, k)
    if h <= 0:
        raise DegenerateTailError(f"degenerate tail: top {k + 1} order statistics are tied")
    return 1.0 / h


def ks_distance(sample: SortedSample, k: int) -> float:
    """
    KS distance between the thresholded empirical tail and y^(-alpha_hat(k))

    The empirical tail S(y) = (1/k) #{i: Z_i / Z_(k+1) > y} is a right
    continuous step function, so the supremum over y >= 1 is attained at
    y = 1 or at a one-sided limit of a jump point.
    """
    alpha = alpha_hat(sample, k)
    z = sample.values
    ratios = (z[:k] / z[k])[::-1]
    jumps = ratios[ratios > 1.0]

    at_one = (k - np.searchsorted(ratios, 1.0, side="right")) / k
    distance = abs(at_one - 1.0)
    if jumps.size:
        fitted = jumps ** (-alpha)
        right = (k - np.searchsorted(ratios, jumps, side="right")) / k
        left = (k - np.searchsorted(ratios, jumps, side="left")) / k
        distance = max(distance, np.max(np.abs(right - fitted)), np.max(np.abs(left - fitted)))
    return float(distance)


class TailFit(BaseModel):
    """Result of the minimum-distance threshold scan"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int
    k_star: int
    alpha_hat: float
    threshold: float
    ks: np.ndarray
    d_curve: np.ndarray
    h_curve: np.ndarray

    @property
    def d_min(self) -> float:
        return float(self.d_curve[np.searchsorted(self.ks, self.k_star)])

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "k": self.ks,
            "d_k": self.d_curve,
            "hill": self.h_curve,
            "alpha_hat": 1.0 / self.h_curve,
        })


def scannable_ks(sample: SortedSample, k_min: int = DEFAULT_K_MIN) -> np.ndarray:
    """
    k in [k_min, n-1] where Z_(k+1) is the last copy of its value

    One k per distinct threshold x, with k + 1 = #{Z >= x}: the tail keeps
    every observation tied at the threshold, as plfit does with xmin.
    Thresholds equal to the maximum, and non-positive ones, are skipped.
    """
    z = sample.values
    ks = np.arange(max(k_min, 1), sample.n)
    following = np.append(z[1:], -np.inf)
    return ks[(z[ks] > following[ks]) & (z[ks] < z[0]) & (z[ks] > 0)]


def min_distance_select(sample: SortedSample, k_min: int = DEFAULT_K_MIN) -> TailFit:
    """
    Choose k minimizing the KS distance over distinct thresholds

    Each candidate threshold keeps its whole tie block in the tail (see
    `scannable_ks`). Ties in d_k go to the smallest k.
    """
    if sample.n < k_min + 2:
        raise ValueError(f"need at least {k_min + 2} observations, got {sample.n}")
    ks = scannable_ks(sample, k_min)
    if ks.size == 0:
        raise DegenerateTailError("degenerate tail: no scannable k (all thresholds tied)")

    d_curve = np.array([ks_distance(sample, int(k)) for k in ks])
    if sample.values[-1] > 0:
        h_curve = hill_curve(sample)[ks - 1]
    else:
        h_curve = np.array([hill(sample, int(k)) for k in ks])
    best = int(np.argmin(d_curve))
    k_star = int(ks[best])
    logger.debug("min-distance scan: %d candidates, k*=%d, d=%.4f", ks.size, k_star, d_curve[best])

    return TailFit(
        n=sample.n,
        k_star=k_star,
        alpha_hat=1.0 / h_curve[best],
        threshold=float(sample.values[k_star]),
        ks=ks,
        d_curve=d_curve,
        h_curve=h_curve,
    )


def tail_empirical(sample: SortedSample, k_n: int, y: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """nu_n(y, inf] = (1/k_n) #{i: Z_i / Z_(k_n) > y}"""
    if not 1 <= k_n <= sample.n - 1:
        raise ValueError(f"k_n must lie in [1, {sample.n - 1}], got {k_n}")
    ratios = (sample.values / sample.values[k_n - 1])[::-1]
    counts = sample.n - np.searchsorted(ratios, np.asarray(y, dtype=float), side="right")
    result = counts / k_n
    return float(result) if np.ndim(y) == 0 else result


def b_scale(delta: float, x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """b(x) = (Gamma(3+2d)/Gamma(1+d))^(1/(2+d)) x^(1/(2+d))"""
    if delta <= -1:
        raise ValueError(f"delta must be > -1, got {delta}")
    if np.any(np.asarray(x) <= 0):
        raise ValueError("x must be positive")
    exponent = 1.0 / (2.0 + delta)
    scale = math.exp((gammaln(3.0 + 2.0 * delta) - gammaln(1.0 + delta)) * exponent)
    return scale * np.asarray(x, dtype=float) ** exponent if np.ndim(x) else scale * float(x) ** exponent


def tail_empirical_scaled(degrees: np.ndarray, delta: float, k_n: int, y: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """(1/k_n) #{i: D_i > y b(n/k_n)}, the tail measure under the theoretical threshold"""
    degrees = np.sort(np.asarray(degrees, dtype=float))
    n = len(degrees)
    cut = np.asarray(y, dtype=float) * b_scale(delta, n / k_n)
    result = (n - np.searchsorted(degrees, cut, side="right")) / k_n
    return float(result) if np.ndim(y) == 0 else result


def kn_default(n: int) -> int:
    """Intermediate sequence k_n = ceil(sqrt(n log n))"""
    if n < 2:
        raise ValueError("n must be >= 2")
    return int(math.ceil(math.sqrt(n * math.log(n))))
