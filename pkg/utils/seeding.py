"""
Seed fan-out for replicated simulations
Every replication gets its own stream derived from (master seed, index)
"""

from typing import Iterable, List

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    """SplitMix64 finalizer (Steele, Lea and Flood)"""
    x = (x + GOLDEN_GAMMA) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def mix_seed(master: int, index: int) -> int:
    """64-bit seed for stream `index` under `master`"""
    return splitmix64((master & MASK64) ^ splitmix64(index & MASK64))


def derive_seeds(master: int, path: Iterable[int]) -> int:
    """Mix a chain of indices, e.g. (cell index, rep index)"""
    seed = master & MASK64
    for index in path:
        seed = mix_seed(seed, index)
    return seed


def rep_seeds(master: int, reps: int) -> List[int]:
    return [mix_seed(master, rep) for rep in range(reps)]
