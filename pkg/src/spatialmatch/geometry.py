"""Random point generation and bipartite geometric compatibility graphs.

Supply and demand nodes live in the unit hypercube ``[0, 1]^k``.  Each supply
node ``i`` carries a nonnegative service range ``r_i`` and is compatible with
every demand node within Euclidean distance ``(r_i / n)^(1/k)`` (volume
parametrization) or ``r_i / n^(1/k)`` (radius parametrization), where ``n`` is
the number of supply nodes.  Both rules are inclusive at the boundary and
coincide for ``k = 1``.

All container types are treated as immutable after construction and are safe
to share across threads or processes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

__all__ = [
    "Parametrization",
    "ServiceRanges",
    "GeoBipartiteGraph",
    "TrimmingGrid",
    "Density1D",
    "UniformDensity",
    "PiecewiseLinearDensity",
    "sample_uniform_points",
    "sample_density_1d",
    "connection_thresholds",
    "build_graph",
    "trim",
]

# Below this many candidate pairs the O(n*m) scan is used directly; the grid
# index only pays off on larger instances.
_BRUTE_FORCE_LIMIT = 10_000

# Cap on grid cells per axis so tiny thresholds cannot blow up memory.
_MAX_CELLS_PER_AXIS = 1 << 10


class Parametrization(Enum):
    """Whether the service range scales the region's volume or its radius."""

    VOLUME = "volume"
    RADIUS = "radius"


@dataclass(frozen=True)
class ServiceRanges:
    """Nonnegative service ranges for the supply side, bounded by ``cap``."""

    values: np.ndarray
    cap: float

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if values.ndim != 1 or values.size < 1:
            raise ValueError("service ranges must be a nonempty 1-d sequence")
        if self.cap <= 0:
            raise ValueError(f"cap must be positive, got {self.cap}")
        if np.any(values < 0) or np.any(values > self.cap):
            raise ValueError("service ranges must lie in [0, cap]")

    @classmethod
    def of(cls, values, cap: float | None = None) -> "ServiceRanges":
        """Build from any sequence; ``cap`` defaults to the largest value."""
        arr = np.asarray(values, dtype=float)
        if cap is None:
            top = float(arr.max()) if arr.size else 0.0
            cap = top if top > 0 else 1.0
        return cls(arr, float(cap))

    def __len__(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class GeoBipartiteGraph:
    """Bipartite compatibility graph between supply and demand point sets.

    ``adjacency[i]`` lists, in increasing order, the demand indices within
    reach of supply node ``i``.  ``thresholds[i]`` is the connection distance
    actually used for node ``i``, and ``n_scale`` the population size that
    scaled the ranges (it equals ``len(supply)`` unless the graph was built
    from a point process whose realized count differs from its rate).
    """

    supply: np.ndarray
    demand: np.ndarray
    ranges: ServiceRanges
    dimension: int
    parametrization: Parametrization
    adjacency: list[list[int]]
    thresholds: np.ndarray
    n_scale: int

    @property
    def num_supply(self) -> int:
        return int(self.supply.shape[0])

    @property
    def num_demand(self) -> int:
        return int(self.demand.shape[0])

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adjacency)

    def edge_set(self) -> set[tuple[int, int]]:
        return {(i, j) for i, nbrs in enumerate(self.adjacency) for j in nbrs}


def sample_uniform_points(count: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``count`` i.i.d. uniform points in ``[0, 1]^k`` as a (count, k) array."""
    if count < 0:
        raise ValueError(f"count must be nonnegative, got {count}")
    if k < 1:
        raise ValueError(f"dimension must be at least 1, got {k}")
    return rng.random((count, k))


class Density1D:
    """A probability density on ``[0, 1]`` that supports inverse-CDF sampling."""

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError


class UniformDensity(Density1D):
    """The uniform density on ``[0, 1]``."""

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        if count < 0:
            raise ValueError(f"count must be nonnegative, got {count}")
        return rng.random(count)


class PiecewiseLinearDensity(Density1D):
    """Piecewise-linear density on ``[0, 1]``, given by values at breakpoints.

    The density interpolates linearly between ``values[i]`` at
    ``breakpoints[i]``.  Breakpoints must start at 0, end at 1, and increase
    strictly; values must be nonnegative and the trapezoid mass must equal 1.
    Its Lipschitz constant is the largest absolute slope, so any member of a
    bounded-slope density class can be represented exactly.
    """

    def __init__(self, breakpoints, values) -> None:
        bp = np.asarray(breakpoints, dtype=float)
        va = np.asarray(values, dtype=float)
        if bp.ndim != 1 or va.ndim != 1 or bp.size != va.size or bp.size < 2:
            raise ValueError("breakpoints and values must be 1-d and equally sized (>= 2)")
        if bp[0] != 0.0 or bp[-1] != 1.0 or np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must increase strictly from 0 to 1")
        if np.any(va < 0):
            raise ValueError("density values must be nonnegative")
        seg_mass = 0.5 * (va[:-1] + va[1:]) * np.diff(bp)
        total = float(seg_mass.sum())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"density must integrate to 1, got {total}")
        self.breakpoints = bp
        self.values = va
        self._cum = np.concatenate(([0.0], np.cumsum(seg_mass)))
        self._cum[-1] = 1.0

    @property
    def lipschitz_constant(self) -> float:
        slopes = np.diff(self.values) / np.diff(self.breakpoints)
        return float(np.abs(slopes).max())

    def ppf(self, q: np.ndarray) -> np.ndarray:
        """Inverse CDF, evaluated elementwise for quantiles in ``[0, 1]``."""
        q = np.asarray(q, dtype=float)
        seg = np.clip(np.searchsorted(self._cum, q, side="right") - 1, 0, self.breakpoints.size - 2)
        b0 = self.breakpoints[seg]
        h = self.breakpoints[seg + 1] - b0
        v0 = self.values[seg]
        slope = (self.values[seg + 1] - v0) / h
        rem = q - self._cum[seg]
        # Solve v0*t + slope*t^2/2 = rem for t in [0, h]; the form below is
        # stable as slope -> 0 and when v0 = 0.
        disc = np.sqrt(np.maximum(v0 * v0 + 2.0 * slope * rem, 0.0))
        denom = v0 + disc
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(denom > 0, 2.0 * rem / denom, 0.0)
        flat = slope == 0.0
        if np.any(flat):
            with np.errstate(divide="ignore", invalid="ignore"):
                t_flat = np.where(v0 > 0, rem / np.where(v0 > 0, v0, 1.0), 0.0)
            t = np.where(flat, t_flat, t)
        return np.clip(b0 + t, 0.0, 1.0)

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        if count < 0:
            raise ValueError(f"count must be nonnegative, got {count}")
        return self.ppf(rng.random(count))


def sample_density_1d(count: int, density: Density1D, rng: np.random.Generator) -> np.ndarray:
    """Draw ``count`` points from a 1-d density, returned as a (count, 1) array."""
    return density.sample(count, rng).reshape(-1, 1)


def connection_thresholds(
    values: np.ndarray, n_scale: int, k: int, parametrization: Parametrization
) -> np.ndarray:
    """Connection distances implied by service ranges under a parametrization.

    Computed as ``(r/n)^(1/k)`` for the volume rule and ``r / n^(1/k)`` for
    the radius rule.  For ``k = 1`` both reduce to the exact division ``r/n``
    so that downstream deadline arithmetic reproduces these floats bit for bit.
    """
    values = np.asarray(values, dtype=float)
    if n_scale < 1:
        raise ValueError(f"n_scale must be positive, got {n_scale}")
    if k == 1:
        return values / n_scale
    if parametrization is Parametrization.VOLUME:
        return (values / n_scale) ** (1.0 / k)
    return values / (n_scale ** (1.0 / k))


def _adjacency_bruteforce(supply, demand, thresholds) -> list[list[int]]:
    n = supply.shape[0]
    if demand.shape[0] == 0:
        return [[] for _ in range(n)]
    diff = demand[None, :, :] - supply[:, None, :]
    dist2 = np.einsum("ijk,ijk->ij", diff, diff)
    hit = dist2 <= thresholds[:, None] ** 2
    return [np.nonzero(hit[i])[0].tolist() for i in range(n)]


def _adjacency_grid(supply, demand, thresholds, k: int) -> list[list[int]]:
    """Uniform-grid adjacency with cells at least as wide as the largest
    threshold, so every compatible pair lies in adjacent cells."""
    n, m = supply.shape[0], demand.shape[0]
    if m == 0:
        return [[] for _ in range(n)]
    h = float(thresholds.max())
    if h <= 0.0:
        nc = 1
    else:
        nc = max(1, min(int(1.0 / h), _MAX_CELLS_PER_AXIS))
    strides = nc ** np.arange(k - 1, -1, -1)

    dcell = np.minimum((demand * nc).astype(np.int64), nc - 1)
    dflat = dcell @ strides
    order = np.argsort(dflat, kind="stable")
    dflat_sorted = dflat[order]
    scell = np.minimum((supply * nc).astype(np.int64), nc - 1)

    offsets = np.array(np.meshgrid(*([(-1, 0, 1)] * k), indexing="ij")).reshape(k, -1).T
    pair_i: list[np.ndarray] = []
    pair_j: list[np.ndarray] = []
    for off in offsets:
        nb = scell + off
        valid = np.all((nb >= 0) & (nb < nc), axis=1)
        idx = np.nonzero(valid)[0]
        if idx.size == 0:
            continue
        nbflat = nb[idx] @ strides
        a = np.searchsorted(dflat_sorted, nbflat, side="left")
        b = np.searchsorted(dflat_sorted, nbflat, side="right")
        lengths = b - a
        total = int(lengths.sum())
        if total == 0:
            continue
        sup = np.repeat(idx, lengths)
        start = np.repeat(a - np.concatenate(([0], np.cumsum(lengths)[:-1])), lengths)
        pos = start + np.arange(total)
        pair_i.append(sup)
        pair_j.append(order[pos])
    if not pair_i:
        return [[] for _ in range(n)]

    pi = np.concatenate(pair_i)
    pj = np.concatenate(pair_j)
    diff = demand[pj] - supply[pi]
    keep = np.einsum("ij,ij->i", diff, diff) <= thresholds[pi] ** 2
    pi, pj = pi[keep], pj[keep]
    o = np.lexsort((pj, pi))
    pi, pj = pi[o], pj[o]
    counts = np.bincount(pi, minlength=n)
    flat = pj.tolist()
    adjacency: list[list[int]] = []
    pos = 0
    for c in counts:
        adjacency.append(flat[pos : pos + c])
        pos += c
    return adjacency


def build_graph(
    supply: np.ndarray,
    ranges: ServiceRanges,
    demand: np.ndarray,
    parametrization: Parametrization = Parametrization.VOLUME,
    *,
    n_scale: int | None = None,
    method: str = "auto",
) -> GeoBipartiteGraph:
    """Build the compatibility graph for given point sets and service ranges.

    ``method`` selects ``"grid"`` (uniform-bucket acceleration), ``"brute"``
    (direct O(n*m) scan, kept as the auditable reference), or ``"auto"`` which
    uses the scan on small instances.  All methods produce identical edges.
    """
    supply = np.atleast_2d(np.asarray(supply, dtype=float))
    demand = np.asarray(demand, dtype=float)
    if demand.size == 0:
        demand = demand.reshape(0, supply.shape[1])
    demand = np.atleast_2d(demand)
    n, k = supply.shape
    if n != len(ranges):
        raise ValueError(f"got {n} supply points but {len(ranges)} service ranges")
    if demand.shape[0] > 0 and demand.shape[1] != k:
        raise ValueError(f"supply is {k}-dimensional but demand is {demand.shape[1]}-dimensional")
    for name, points in (("supply", supply), ("demand", demand)):
        if points.size and (points.min() < 0.0 or points.max() > 1.0):
            raise ValueError(f"{name} points must lie in the unit cube [0, 1]^{k}")
    if n_scale is None:
        n_scale = n
    thresholds = connection_thresholds(ranges.values, n_scale, k, parametrization)

    if method == "auto":
        method = "brute" if n * demand.shape[0] <= _BRUTE_FORCE_LIMIT else "grid"
    if method == "brute":
        adjacency = _adjacency_bruteforce(supply, demand, thresholds)
    elif method == "grid":
        adjacency = _adjacency_grid(supply, demand, thresholds, k)
    else:
        raise ValueError(f"unknown construction method {method!r}")
    return GeoBipartiteGraph(
        supply=supply,
        demand=demand,
        ranges=ranges,
        dimension=k,
        parametrization=parametrization,
        adjacency=adjacency,
        thresholds=thresholds,
        n_scale=int(n_scale),
    )


@dataclass(frozen=True)
class TrimmingGrid:
    """Axis-aligned partition of ``[0, 1]^k`` into cells of side ``2 k (M/n)^(1/k) / eps``.

    The last cell along each axis absorbs the rounding remainder.  Cell ids
    are the row-major index of the k-tuple of per-axis cells.
    """

    eps: float
    cap: float
    n: int
    k: int
    side_length: float = field(init=False)
    cells_per_axis: int = field(init=False)

    def __post_init__(self) -> None:
        if self.eps <= 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        side = 2.0 * self.k * (self.cap / self.n) ** (1.0 / self.k) / self.eps
        cells = 1 if side >= 1.0 else int(math.ceil(1.0 / side))
        object.__setattr__(self, "side_length", side)
        object.__setattr__(self, "cells_per_axis", cells)

    def cell_ids(self, points: np.ndarray) -> np.ndarray:
        """Map points to integer cell ids; the coordinate 1.0 falls in the last cell."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        nc = self.cells_per_axis
        if nc == 1:
            return np.zeros(points.shape[0], dtype=np.int64)
        idx = np.minimum((points / self.side_length).astype(np.int64), nc - 1)
        strides = nc ** np.arange(self.k - 1, -1, -1)
        return idx @ strides


def trim(graph: GeoBipartiteGraph, eps: float, cap: float | None = None) -> GeoBipartiteGraph:
    """Remove every edge whose endpoints fall in different trimming cells.

    Points and ranges are unchanged; only cross-cell edges disappear, so the
    operation is idempotent for a fixed grid and never increases the matching
    number.
    """
    if cap is None:
        cap = graph.ranges.cap
    if cap < float(graph.ranges.values.max() if len(graph.ranges) else 0.0):
        raise ValueError("cap must dominate every service range")
    grid = TrimmingGrid(eps=eps, cap=cap, n=graph.num_supply, k=graph.dimension)
    if grid.cells_per_axis == 1:
        adjacency = [list(a) for a in graph.adjacency]
    else:
        supply_cells = grid.cell_ids(graph.supply)
        demand_cells = grid.cell_ids(graph.demand)
        adjacency = [
            [j for j in nbrs if demand_cells[j] == supply_cells[i]]
            for i, nbrs in enumerate(graph.adjacency)
        ]
    return GeoBipartiteGraph(
        supply=graph.supply,
        demand=graph.demand,
        ranges=graph.ranges,
        dimension=graph.dimension,
        parametrization=graph.parametrization,
        adjacency=adjacency,
        thresholds=graph.thresholds,
        n_scale=graph.n_scale,
    )
