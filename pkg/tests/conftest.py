"""Shared brute-force oracles for the test suite.

These deliberately avoid the library's accelerated code paths: the matching
oracle enumerates over demand subsets, and the adjacency oracle is a direct
O(n*m) distance scan.
"""

from __future__ import annotations

import numpy as np


def brute_force_matching_number(adjacency: list[list[int]], num_demand: int) -> int:
    """Maximum matching size by exhaustive search over demand subsets.

    Bitmask recursion over supply nodes; exponential in the demand count, so
    only suitable for tiny graphs.
    """
    n = len(adjacency)
    memo: dict[tuple[int, int], int] = {}

    def best(i: int, used: int) -> int:
        if i == n:
            return 0
        key = (i, used)
        if key in memo:
            return memo[key]
        result = best(i + 1, used)
        for j in adjacency[i]:
            bit = 1 << j
            if not used & bit:
                result = max(result, 1 + best(i + 1, used | bit))
        memo[key] = result
        return result

    return best(0, 0)


def brute_force_adjacency(supply, demand, thresholds) -> list[list[int]]:
    """Direct pairwise evaluation of the inclusive edge rule."""
    supply = np.atleast_2d(supply)
    demand = np.atleast_2d(demand)
    out = []
    for i in range(supply.shape[0]):
        if demand.shape[0] == 0:
            out.append([])
            continue
        dist = np.sqrt(((demand - supply[i]) ** 2).sum(axis=1))
        out.append(np.nonzero(dist <= thresholds[i])[0].tolist())
    return out
