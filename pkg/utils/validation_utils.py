"""
Agreement metrics between simulation and theory
Includes total variation, standard-error checks and KS tests
"""

from collections import Counter
from typing import Dict, Hashable, Iterable, Tuple

import numpy as np
from scipy import stats
from statsmodels.stats.weightstats import DescrStatsW


def total_variation(p: Dict[Hashable, float], q: Dict[Hashable, float]) -> float:
    """
    Total variation distance between two discrete laws

    Args:
        p: Outcome -> probability
        q: Outcome -> probability

    Returns:
        float: (1/2) sum |p(x) - q(x)| over the union of supports
    """
    support = set(p) | set(q)
    return 0.5 * sum(abs(p.get(x, 0.0) - q.get(x, 0.0)) for x in support)


def empirical_law(samples: Iterable[Hashable]) -> Dict[Hashable, float]:
    """Relative frequencies of hashable outcomes"""
    counts = Counter(samples)
    total = sum(counts.values())
    if total == 0:
        raise ValueError("empty sample")
    return {x: c / total for x, c in counts.items()}


def mean_and_se(values: np.ndarray) -> Tuple[float, float]:
    """
    Sample mean and its standard error

    Args:
        values: Replicated estimates

    Returns:
        tuple: (mean, standard error); SE is nan for fewer than 2 values
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return float("nan"), float("nan")
    descr = DescrStatsW(values)
    se = descr.std_mean if values.size > 1 else float("nan")
    return float(descr.mean), float(se)


def within_standard_errors(values: np.ndarray, target: float, n_se: float = 3.0) -> bool:
    """True if the sample mean lies within n_se standard errors of target"""
    mean, se = mean_and_se(values)
    if se == 0:
        return mean == target
    return abs(mean - target) <= n_se * se


def ks_against(values: np.ndarray, law) -> Tuple[float, float]:
    """
    One-sample KS test against a frozen scipy distribution

    Returns:
        tuple: (KS statistic, p-value)
    """
    result = stats.kstest(np.asarray(values, dtype=float), law.cdf)
    return float(result.statistic), float(result.pvalue)


def ks_two_sample(first: np.ndarray, second: np.ndarray) -> Tuple[float, float]:
    result = stats.ks_2samp(np.asarray(first, dtype=float), np.asarray(second, dtype=float))
    return float(result.statistic), float(result.pvalue)


def interpret_pvalue(p_value: float, level: float = 0.01) -> Tuple[str, str]:
    """
    Interpret a goodness-of-fit p-value

    Args:
        p_value: Test p-value
        level: Rejection level

    Returns:
        tuple: (category, description)
    """
    if p_value < level:
        return ("Rejected", f"Sample departs from the reference law (p < {level})")
    elif p_value < 0.1:
        return ("Borderline", "Agreement is weak")
    else:
        return ("Consistent", "No evidence against the reference law")


def interpret_relative_error(estimate: float, target: float) -> Tuple[str, str]:
    """
    Interpret the relative error of an estimate against its known target

    Returns:
        tuple: (category, description)
    """
    error = abs(estimate - target) / abs(target)
    if error < 0.02:
        return ("Excellent", "Within 2% of the target")
    elif error < 0.05:
        return ("Good", "Within 5% of the target")
    elif error < 0.1:
        return ("Fair", "Within 10% of the target")
    else:
        return ("Poor", "More than 10% away from the target")
