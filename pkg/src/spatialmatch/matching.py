"""Maximum matchings on bipartite geometric graphs.

Provides the Hopcroft-Karp maximum matcher, the earliest-deadline greedy
matcher for 1-d interval instances (which is maximum on such graphs), the set
of demand nodes avoidable by some maximum matching, and the window-measure
functional used to estimate the marginal value of an extra supply node.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .geometry import GeoBipartiteGraph

__all__ = [
    "Matching",
    "DPlusSet",
    "NotMaximumMatchingError",
    "hopcroft_karp",
    "greedy_interval",
    "dplus",
    "delta_window_measure",
]

_INF = float("inf")


class NotMaximumMatchingError(ValueError):
    """Raised when an operation requires a maximum matching but got a smaller one."""


@dataclass(frozen=True)
class Matching:
    """A set of supply-demand pairs in which every vertex appears at most once."""

    pairs: frozenset[tuple[int, int]]
    size: int

    @classmethod
    def from_pairs(cls, pairs) -> "Matching":
        pairs = frozenset((int(i), int(j)) for i, j in pairs)
        supply_side = [i for i, _ in pairs]
        demand_side = [j for _, j in pairs]
        if len(set(supply_side)) != len(pairs) or len(set(demand_side)) != len(pairs):
            raise ValueError("a vertex appears in more than one pair")
        return cls(pairs=pairs, size=len(pairs))

    def supply_to_demand(self) -> dict[int, int]:
        return {i: j for i, j in self.pairs}

    def demand_to_supply(self) -> dict[int, int]:
        return {j: i for i, j in self.pairs}

    def verify_on(self, graph: GeoBipartiteGraph) -> None:
        """Check that every pair is an edge of ``graph``."""
        for i, j in self.pairs:
            if not (0 <= i < graph.num_supply) or j not in graph.adjacency[i]:
                raise ValueError(f"pair ({i}, {j}) is not an edge of the graph")


def hopcroft_karp(graph: GeoBipartiteGraph) -> Matching:
    """Compute a maximum matching via Hopcroft-Karp.

    Runs layered BFS phases from the unmatched supply nodes and augments along
    vertex-disjoint shortest paths, O(E sqrt(V)) overall.
    """
    adjacency = graph.adjacency
    n, m = graph.num_supply, graph.num_demand
    match_s = [-1] * n
    match_d = [-1] * m
    dist = [0.0] * n

    def bfs() -> bool:
        queue: deque[int] = deque()
        for u in range(n):
            if match_s[u] == -1:
                dist[u] = 0.0
                queue.append(u)
            else:
                dist[u] = _INF
        found = _INF
        while queue:
            u = queue.popleft()
            if dist[u] < found:
                for v in adjacency[u]:
                    w = match_d[v]
                    if w == -1:
                        if found == _INF:
                            found = dist[u] + 1.0
                    elif dist[w] == _INF:
                        dist[w] = dist[u] + 1.0
                        queue.append(w)
        return found != _INF

    def dfs(u: int) -> bool:
        for v in adjacency[u]:
            w = match_d[v]
            if w == -1 or (dist[w] == dist[u] + 1.0 and dfs(w)):
                match_s[u] = v
                match_d[v] = u
                return True
        dist[u] = _INF
        return False

    while bfs():
        for u in range(n):
            if match_s[u] == -1:
                dfs(u)
    pairs = frozenset((u, match_s[u]) for u in range(n) if match_s[u] != -1)
    return Matching(pairs=pairs, size=len(pairs))


def greedy_interval(graph: GeoBipartiteGraph, ranges=None) -> Matching:
    """Earliest-deadline greedy matching for 1-d instances.

    Demand nodes are processed in increasing position; each is matched to its
    unmatched neighbor whose deadline (rightmost reachable point) is smallest,
    ties broken by smaller supply index.  On interval graphs this greedy rule
    produces a maximum matching.
    """
    if graph.dimension != 1:
        raise ValueError(f"greedy_interval requires k=1, got k={graph.dimension}")
    if ranges is None:
        thresholds = graph.thresholds
    else:
        values = np.asarray(getattr(ranges, "values", ranges), dtype=float)
        thresholds = values / graph.n_scale
    supply_pos = graph.supply[:, 0]
    deadlines = supply_pos + thresholds

    demand_to_supply: list[list[int]] = [[] for _ in range(graph.num_demand)]
    for i, nbrs in enumerate(graph.adjacency):
        for j in nbrs:
            demand_to_supply[j].append(i)

    order = np.argsort(graph.demand[:, 0], kind="stable")
    matched = [False] * graph.num_supply
    pairs = []
    for j in order.tolist():
        best = -1
        best_key: tuple[float, int] | None = None
        for i in demand_to_supply[j]:
            if matched[i]:
                continue
            key = (deadlines[i], i)
            if best_key is None or key < best_key:
                best, best_key = i, key
        if best >= 0:
            matched[best] = True
            pairs.append((best, j))
    return Matching(pairs=frozenset(pairs), size=len(pairs))


@dataclass(frozen=True)
class DPlusSet:
    """Demand indices left unmatched by at least one maximum matching."""

    indices: tuple[int, ...]

    def __contains__(self, j: int) -> bool:
        return j in set(self.indices)

    def __len__(self) -> int:
        return len(self.indices)


def dplus(graph: GeoBipartiteGraph, max_matching: Matching) -> DPlusSet:
    """Demand nodes avoidable by some maximum matching.

    A demand node is avoidable iff it is exposed or reachable from an exposed
    demand node by an alternating path leaving demand on non-matching edges
    and returning on matching edges.  The input must be maximum; if the same
    search uncovers an augmenting path the matching was not maximum and the
    call is rejected rather than silently repaired.
    """
    demand_to_supply: list[list[int]] = [[] for _ in range(graph.num_demand)]
    for i, nbrs in enumerate(graph.adjacency):
        for j in nbrs:
            demand_to_supply[j].append(i)

    match_d = [-1] * graph.num_demand
    match_s = [-1] * graph.num_supply
    for i, j in max_matching.pairs:
        if j not in graph.adjacency[i]:
            raise ValueError(f"pair ({i}, {j}) is not an edge of the graph")
        match_d[j] = i
        match_s[i] = j

    reached = [False] * graph.num_demand
    visited_s = [False] * graph.num_supply
    queue: deque[int] = deque()
    for j in range(graph.num_demand):
        if match_d[j] == -1:
            reached[j] = True
            queue.append(j)
    while queue:
        j = queue.popleft()
        for i in demand_to_supply[j]:
            if visited_s[i]:
                continue
            visited_s[i] = True
            if match_s[i] == -1:
                raise NotMaximumMatchingError(
                    "input matching admits an augmenting path, so it is not maximum"
                )
            nxt = match_s[i]
            if not reached[nxt]:
                reached[nxt] = True
                queue.append(nxt)
    return DPlusSet(indices=tuple(j for j in range(graph.num_demand) if reached[j]))


def delta_window_measure(positions, ell: float, n: int) -> float:
    """Lebesgue measure of the union of windows ``[p - ell/n, p + ell/n]`` in ``[0, 1]``.

    ``positions`` must be sorted ascending.  Averaged over sampled graphs with
    the avoidable demand positions plugged in, this is a Monte Carlo estimate
    of the probability that one extra supply node of range ``ell`` augments
    the matching.
    """
    positions = np.asarray(positions, dtype=float)
    if positions.size == 0:
        return 0.0
    if np.any(np.diff(positions) < 0):
        raise ValueError("positions must be sorted ascending")
    if ell < 0:
        raise ValueError(f"ell must be nonnegative, got {ell}")
    half = ell / n
    total = 0.0
    cur_lo = cur_hi = None
    for p in positions:
        lo = max(p - half, 0.0)
        hi = min(p + half, 1.0)
        if hi <= lo:
            continue
        if cur_lo is None:
            cur_lo, cur_hi = lo, hi
        elif lo <= cur_hi:
            cur_hi = max(cur_hi, hi)
        else:
            total += cur_hi - cur_lo
            cur_lo, cur_hi = lo, hi
    if cur_lo is not None:
        total += cur_hi - cur_lo
    return total
