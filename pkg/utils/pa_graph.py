"""
Linear preferential attachment graphs (Models A and B)
Growth with exact attachment probabilities, a Fenwick-tree weight index,
degree counts and an exact enumeration oracle for small graphs
"""

from __future__ import annotations

import logging
from enum import Enum
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd
from numba import njit
from pydantic import BaseModel, ConfigDict, Field

logger = logging.getLogger(__name__)

SEED_MASK = 0xFFFFFFFFFFFFFFFF


class Model(str, Enum):
    A = "A"
    B = "B"


class PaParams(BaseModel):
    """Model variant, degree offset and number of growth steps"""

    model_config = ConfigDict(frozen=True)

    model: Model = Model.A
    delta: float = Field(0.0, gt=-1.0, allow_inf_nan=False)
    n: int = Field(1, ge=1)

    @property
    def tail_index(self) -> float:
        return 2.0 + self.delta


# ============= Fenwick kernels =============

@njit(cache=True)
def _fenwick_add(tree, index, value):
    size = tree.shape[0] - 1
    while index <= size:
        tree[index] += value
        index += index & (-index)


@njit(cache=True)
def _fenwick_prefix(tree, index):
    total = 0.0
    while index > 0:
        total += tree[index]
        index -= index & (-index)
    return total


@njit(cache=True)
def _fenwick_find(tree, value, top_bit):
    # smallest index whose cumulative weight exceeds value
    size = tree.shape[0] - 1
    pos = 0
    step = top_bit
    while step > 0:
        nxt = pos + step
        if nxt <= size and tree[nxt] <= value:
            pos = nxt
            value -= tree[nxt]
        step >>= 1
    return pos + 1


def _top_bit(size: int) -> int:
    bit = 1
    while bit * 2 <= size:
        bit *= 2
    return bit


class WeightIndex:
    """
    Binary-indexed prefix-sum tree over node weights w_i = D_i + delta

    Nodes are appended in creation order and labeled from 1. Point updates
    and cumulative-weight inversion are O(log n).
    """

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("capacity must be at least 1")
        self._tree = np.zeros(capacity + 1)
        self._top_bit = _top_bit(capacity)
        self._size = 0
        self._total = 0.0

    @classmethod
    def from_degrees(cls, degrees: np.ndarray, delta: float, capacity: Optional[int] = None) -> "WeightIndex":
        degrees = np.asarray(degrees, dtype=float)
        index = cls(capacity or len(degrees))
        for d in degrees:
            index.append(d + delta)
        return index

    def __len__(self) -> int:
        return self._size

    @property
    def capacity(self) -> int:
        return self._tree.shape[0] - 1

    @property
    def total(self) -> float:
        return self._total

    def append(self, weight: float) -> int:
        """Add a node with the given weight and return its label"""
        if weight <= 0:
            raise ValueError(f"weights must be positive, got {weight}")
        if self._size >= self.capacity:
            raise IndexError("weight index is full")
        self._size += 1
        _fenwick_add(self._tree, self._size, float(weight))
        self._total += weight
        return self._size

    def add(self, label: int, value: float) -> None:
        if not 1 <= label <= self._size:
            raise IndexError(f"node {label} not in index of size {self._size}")
        _fenwick_add(self._tree, label, float(value))
        self._total += value

    def prefix(self, label: int) -> float:
        """Cumulative weight of nodes 1..label"""
        return _fenwick_prefix(self._tree, min(label, self._size))

    def weight(self, label: int) -> float:
        return self.prefix(label) - self.prefix(label - 1)

    def find(self, value: float) -> int:
        """Label of the node whose cumulative interval contains value in [0, total)"""
        if not 0 <= value < self._total:
            raise ValueError(f"value {value} outside [0, {self._total})")
        return min(_fenwick_find(self._tree, value, self._top_bit), self._size)

    def sample(self, rng: np.random.Generator) -> int:
        return self.find(rng.random() * self._total)


# ============= Growth kernel =============

@njit(cache=True)
def _grow_kernel(self_loops, delta, uniforms, exponentials, targets, degrees, times):
    n = targets.shape[0]
    tree = np.zeros(n + 1)
    top_bit = 1
    while top_bit * 2 <= n:
        top_bit *= 2

    degrees[0] = 2
    targets[0] = 1
    _fenwick_add(tree, 1, 2.0 + delta)
    newcomer = 1.0 + delta
    timed = exponentials.shape[0] > 0
    clock = 0.0

    for m in range(1, n):
        total = (2.0 + delta) * m
        weight = total + newcomer if self_loops else total
        if timed:
            clock += exponentials[m - 1] / weight
            times[m] = clock
        r = uniforms[m - 1] * weight
        if self_loops and r >= total:
            targets[m] = m + 1
            degrees[m] = 2
            _fenwick_add(tree, m + 1, 2.0 + delta)
        else:
            j = _fenwick_find(tree, r, top_bit)
            if j > m:
                j = m
            targets[m] = j
            degrees[j - 1] += 1
            degrees[m] = 1
            _fenwick_add(tree, j, 1.0)
            _fenwick_add(tree, m + 1, newcomer)


def run_growth(
    params: PaParams,
    uniforms: np.ndarray,
    exponentials: Optional[np.ndarray] = None
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Drive the growth kernel with pre-drawn random numbers

    Args:
        params: Model, delta and number of steps
        uniforms: n-1 uniforms choosing the attachment target at each step
        exponentials: Optional n-1 unit exponentials; when given, event times
            are accumulated with rate equal to the current total weight

    Returns:
        tuple: (targets, degrees, times) with times all zero when untimed
    """
    n = params.n
    targets = np.zeros(n, dtype=np.int64)
    degrees = np.zeros(n, dtype=np.int64)
    times = np.zeros(n)
    if exponentials is None:
        exponentials = np.empty(0)
    _grow_kernel(
        params.model == Model.B,
        float(params.delta),
        np.ascontiguousarray(uniforms, dtype=np.float64),
        np.ascontiguousarray(exponentials, dtype=np.float64),
        targets,
        degrees,
        times,
    )
    return targets, degrees, times


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


class Graph(BaseModel):
    """Edge history and degree array of a generated network; immutable"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    sources: np.ndarray
    targets: np.ndarray
    degrees: np.ndarray

    @property
    def n(self) -> int:
        return int(self.degrees.shape[0])

    @property
    def edges(self) -> List[Tuple[int, int]]:
        return list(zip(self.sources.tolist(), self.targets.tolist()))

    @property
    def max_degree(self) -> int:
        return int(self.degrees.max())

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "step": np.arange(1, self.n + 1),
            "source": self.sources,
            "target": self.targets,
        })

    @classmethod
    def from_edges(cls, sources: np.ndarray, targets: np.ndarray) -> "Graph":
        """Rebuild a graph from its edge list (labels 1..n, one edge per step)"""
        sources = np.asarray(sources, dtype=np.int64)
        targets = np.asarray(targets, dtype=np.int64)
        n = len(sources)
        if n == 0 or len(targets) != n:
            raise ValueError("edge list must be non-empty with matching columns")
        if sources.min() < 1 or max(sources.max(), targets.max()) > n:
            raise ValueError("node labels must lie in 1..n")
        degrees = np.bincount(sources - 1, minlength=n) + np.bincount(targets - 1, minlength=n)
        return cls(
            sources=_frozen(sources.copy()),
            targets=_frozen(targets.copy()),
            degrees=_frozen(degrees.astype(np.int64)),
        )


def grow(params: PaParams, seed: int) -> Graph:
    """
    Grow a linear preferential attachment graph

    Starts from one node with a self loop and adds n-1 nodes. Model A attaches
    node v_{m+1} to v_i with probability (D_i + delta) / ((2 + delta) m);
    Model B additionally lets the new node be born with a self loop with
    probability (1 + delta) / ((2 + delta) m + 1 + delta).

    Args:
        params: Model, delta and number of steps
        seed: Any 64-bit integer; identical (params, seed) give identical graphs

    Returns:
        Graph: Edge list and degree array
    """
    rng = np.random.default_rng(seed & SEED_MASK)
    uniforms = rng.random(params.n - 1)
    targets, degrees, _ = run_growth(params, uniforms)

    total = int(degrees.sum())
    if total != 2 * params.n:
        raise RuntimeError(f"degree sum {total} != 2n = {2 * params.n}")
    if params.n >= 100_000:
        logger.info("Grew model %s graph: n=%d delta=%.3f max degree=%d",
                    params.model.value, params.n, params.delta, degrees.max())

    return Graph(
        sources=_frozen(np.arange(1, params.n + 1, dtype=np.int64)),
        targets=_frozen(targets),
        degrees=_frozen(degrees),
    )


def attach_distribution(graph: Union[Graph, np.ndarray], params: PaParams) -> np.ndarray:
    """
    Exact distribution of the next attachment

    Returns:
        np.ndarray: Length n for Model A; length n + 1 for Model B where the
        last entry is the self-loop probability
    """
    degrees = graph.degrees if isinstance(graph, Graph) else np.asarray(graph)
    n = len(degrees)
    weights = degrees.astype(float) + params.delta
    if params.model == Model.A:
        return weights / ((2.0 + params.delta) * n)
    denominator = (2.0 + params.delta) * n + 1.0 + params.delta
    return np.append(weights, 1.0 + params.delta) / denominator


class DegreeCounts(BaseModel):
    """N_k(n) and N_{>k}(n) indexed by k = 0..max degree"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    counts: np.ndarray
    tail: np.ndarray

    @property
    def n(self) -> int:
        return int(self.tail[0])

    def n_k(self, k: int) -> int:
        return int(self.counts[k]) if 0 <= k < len(self.counts) else 0

    def n_gt(self, k: int) -> int:
        if k < 0:
            return self.n
        return int(self.tail[k]) if k < len(self.tail) else 0

    def as_dicts(self) -> Tuple[Dict[int, int], Dict[int, int]]:
        counts = {k: int(c) for k, c in enumerate(self.counts) if c > 0}
        tail = {k: int(c) for k, c in enumerate(self.tail)}
        return counts, tail


def degree_counts(graph: Union[Graph, np.ndarray]) -> DegreeCounts:
    """Count nodes by degree and by degree exceedance"""
    degrees = graph.degrees if isinstance(graph, Graph) else np.asarray(graph, dtype=np.int64)
    counts = np.bincount(degrees)
    tail = len(degrees) - np.cumsum(counts)
    return DegreeCounts(counts=_frozen(counts), tail=_frozen(tail))


def enumerate_degree_law(
    model: Union[Model, str],
    delta: float,
    n: int,
    as_multiset: bool = False
) -> Dict[Tuple[int, ...], float]:
    """
    Exact law of the degree vector after n steps

    Multiplies the step probabilities along every path of the attachment
    tree. The state space grows factorially, so keep n small.

    Args:
        model: 'A' or 'B'
        delta: Degree offset
        n: Number of steps
        as_multiset: Merge vectors with the same sorted degrees

    Returns:
        dict: Degree tuple -> probability
    """
    model = Model(model)
    params = PaParams(model=model, delta=delta, n=n)
    law: Dict[Tuple[int, ...], float] = {(2,): 1.0}
    for m in range(1, n):
        nxt: Dict[Tuple[int, ...], float] = {}
        for state, prob in law.items():
            step = attach_distribution(np.array(state), params)
            for j in range(m):
                new_state = list(state)
                new_state[j] += 1
                key = tuple(new_state) + (1,)
                nxt[key] = nxt.get(key, 0.0) + prob * step[j]
            if model == Model.B:
                key = state + (2,)
                nxt[key] = nxt.get(key, 0.0) + prob * step[m]
        law = nxt
    if not as_multiset:
        return law
    merged: Dict[Tuple[int, ...], float] = {}
    for state, prob in law.items():
        key = tuple(sorted(state, reverse=True))
        merged[key] = merged.get(key, 0.0) + prob
    return merged
