"""Exact minimum partition of a small ground set into admissible blocks."""
from __future__ import annotations

import math
from typing import Callable

import numpy as np


def admissible_table(m: int, is_admissible: Callable[[list[int]], bool]) -> np.ndarray:
    """Evaluate ``is_admissible`` on every nonempty subset of ``range(m)``."""
    table = np.zeros(1 << m, dtype=bool)
    table[0] = True
    for mask in range(1, 1 << m):
        members = [i for i in range(m) if mask >> i & 1]
        table[mask] = bool(is_admissible(members))
    return table


def min_partition(admissible: np.ndarray, m: int) -> int | float:
    """Fewest admissible blocks covering ``range(m)`` exactly (inf if impossible)."""
    size = 1 << m
    dp = [math.inf] * size
    dp[0] = 0
    for mask in range(1, size):
        low = mask & -mask
        rest = mask ^ low
        best = math.inf
        sub = rest
        while True:
            block = sub | low
            if admissible[block]:
                v = dp[mask ^ block] + 1
                if v < best:
                    best = v
            if sub == 0:
                break
            sub = (sub - 1) & rest
        dp[mask] = best
    return dp[size - 1]


def gamma_admissible_table(f: np.ndarray, gamma: float) -> np.ndarray:
    """Subsets in which every member's summed f-score from the others is <= gamma."""
    m = f.shape[0]
    masks = np.arange(1 << m)
    member = (masks[:, None] >> np.arange(m)[None, :]) & 1
    scores = member.astype(np.float64) @ f
    return np.all((scores <= gamma) | (member == 0), axis=1)
