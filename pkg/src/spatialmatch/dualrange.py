"""Dual service-range model on the unit interval.

Every supply node is either inflexible, with service range ``base``, or
flexible, with range ``base + extra``; a fraction ``p`` is flexible.  The
left-to-right matching dynamics reduce to a two-dimensional Markov chain on
the scaled lead times

    x = n (u - v_F) + (base + extra),    y = n (u - v_NF) + base,

where ``u`` is the active demand position and ``v_F`` and ``v_NF`` the active
flexible and inflexible supply positions.  The plane splits into five regions
A-E; the chain's stationary occupation frequencies determine the long-run
matched fractions, and the two degenerate cases (``base = 0``, ``extra = 0``)
admit closed-form stationary densities and matching rates.

This module provides the chain (classification, one-step transition, long-run
frequency simulation), the generative left-to-right process on realized point
processes, the closed forms, the degenerate-case stationary densities, and
the analytic upper/lower bounds on the matched fraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

__all__ = [
    "DegenerateParameterError",
    "DualRangeParams",
    "ChainState",
    "Region",
    "Event",
    "RegionFrequencies",
    "MatchedFractions",
    "GenerativeStats",
    "classify_region",
    "step",
    "simulate_frequencies",
    "matched_fractions",
    "generative_process",
    "closed_form_base0",
    "closed_form_extra0",
    "stationary_density_base0",
    "stationary_density_extra0",
    "upper_bound",
    "lower_bound_q",
    "lower_bound_q_limit",
    "lower_bound_sup",
]

_INF = float("inf")
_DRAW_BLOCK = 1 << 14


class DegenerateParameterError(ValueError):
    """Raised when a flexible fraction of 0 or 1 makes a required draw undefined."""


@dataclass(frozen=True)
class DualRangeParams:
    """Model parameters: inflexible range, flexibility increment, flexible fraction."""

    base: float
    extra: float
    p: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.base) and self.base >= 0):
            raise ValueError(f"base must be finite and nonnegative, got {self.base}")
        if not (math.isfinite(self.extra) and self.extra >= 0):
            raise ValueError(f"extra must be finite and nonnegative, got {self.extra}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")


class ChainState(NamedTuple):
    x: float
    y: float


class Region(Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"
    E = "E"


class Event(Enum):
    MATCH = "match"
    SKIP_DEMAND = "skip_demand"
    DISCARD_SUPPLY = "discard_supply"


_EVENT_OF_REGION = {
    Region.A: Event.DISCARD_SUPPLY,
    Region.B: Event.MATCH,
    Region.C: Event.DISCARD_SUPPLY,
    Region.D: Event.SKIP_DEMAND,
    Region.E: Event.MATCH,
}


def classify_region(state: ChainState, params: DualRangeParams) -> Region:
    """Classify a chain state into one of the regions A-E.

    The regions share closed boundaries; overlaps are resolved by the fixed
    precedence D, B, A, E, C so classification is deterministic and total.
    """
    x, y = state
    c2 = 2.0 * params.base
    e2 = 2.0 * params.extra
    ce2 = 2.0 * (params.base + params.extra)
    if x <= 0.0 and y <= 0.0:
        return Region.D
    if 0.0 <= y <= c2 and x <= y + e2:
        return Region.B
    if y >= c2 and x <= y + e2:
        return Region.A
    if 0.0 <= x <= ce2 and y <= max(x - e2, 0.0):
        return Region.E
    if x >= ce2 and y <= x - e2:
        return Region.C
    raise RuntimeError(f"state {state} escaped the region partition")


def step(
    state: ChainState, params: DualRangeParams, rng: np.random.Generator
) -> tuple[ChainState, Region, Event]:
    """One transition of the lead-time chain.

    Increments per region, with u ~ Exp(p), v ~ Exp(1-p), w ~ Exp(1):
    A: (0, -v);  B: (w, w - v);  C: (-u, 0);  D: (w, w);  E: (w - u, w).
    Regions drawing u require p > 0 and regions drawing v require p < 1;
    violations raise rather than silently producing undefined draws.
    """
    region = classify_region(state, params)
    p = params.p
    x, y = state
    if region is Region.A:
        if p == 1.0:
            raise DegenerateParameterError("region A draws Exp(1-p), undefined at p=1")
        nxt = ChainState(x, y - rng.exponential(1.0 / (1.0 - p)))
    elif region is Region.B:
        if p == 1.0:
            raise DegenerateParameterError("region B draws Exp(1-p), undefined at p=1")
        w = rng.exponential(1.0)
        v = rng.exponential(1.0 / (1.0 - p))
        nxt = ChainState(x + w, y + w - v)
    elif region is Region.C:
        if p == 0.0:
            raise DegenerateParameterError("region C draws Exp(p), undefined at p=0")
        nxt = ChainState(x - rng.exponential(1.0 / p), y)
    elif region is Region.D:
        w = rng.exponential(1.0)
        nxt = ChainState(x + w, y + w)
    else:
        if p == 0.0:
            raise DegenerateParameterError("region E draws Exp(p), undefined at p=0")
        w = rng.exponential(1.0)
        u = rng.exponential(1.0 / p)
        nxt = ChainState(x + w - u, y + w)
    return nxt, region, _EVENT_OF_REGION[region]


@dataclass(frozen=True)
class RegionFrequencies:
    """Empirical long-run fractions of chain steps spent in each region."""

    f_a: float
    f_b: float
    f_c: float
    f_d: float
    f_e: float

    def __post_init__(self) -> None:
        total = self.f_a + self.f_b + self.f_c + self.f_d + self.f_e
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"region frequencies must sum to 1, got {total}")

    def as_dict(self) -> dict[Region, float]:
        return {
            Region.A: self.f_a,
            Region.B: self.f_b,
            Region.C: self.f_c,
            Region.D: self.f_d,
            Region.E: self.f_e,
        }


def simulate_frequencies(
    params: DualRangeParams,
    steps: int,
    burn_in: int | None = None,
    rng: np.random.Generator | None = None,
) -> RegionFrequencies:
    """Long-run region frequencies from one chain trajectory.

    Runs ``steps`` transitions from the fresh-agents state
    ``(base + extra, base)`` and reports occupation fractions after discarding
    ``burn_in`` initial steps (default one tenth).  Draws are consumed in
    blocks for speed; the trajectory is deterministic for a fixed seed.
    """
    if rng is None:
        raise ValueError("a seeded generator is required")
    if not 0.0 < params.p < 1.0:
        raise DegenerateParameterError("simulation requires 0 < p < 1")
    if steps < 1:
        raise ValueError(f"steps must be positive, got {steps}")
    if burn_in is None:
        burn_in = steps // 10
    if not 0 <= burn_in < steps:
        raise ValueError(f"burn_in must lie in [0, steps), got {burn_in}")

    p = params.p
    c2 = 2.0 * params.base
    e2 = 2.0 * params.extra
    ce2 = 2.0 * (params.base + params.extra)
    block = _DRAW_BLOCK
    us = rng.exponential(1.0 / p, block)
    vs = rng.exponential(1.0 / (1.0 - p), block)
    ws = rng.exponential(1.0, block)
    ui = vi = wi = 0

    x, y = params.base + params.extra, params.base
    counts = [0, 0, 0, 0, 0]
    for t in range(steps):
        if x <= 0.0 and y <= 0.0:
            reg = 3
            if wi == block:
                ws = rng.exponential(1.0, block)
                wi = 0
            w = ws[wi]
            wi += 1
            x += w
            y += w
        elif 0.0 <= y <= c2 and x <= y + e2:
            reg = 1
            if wi == block:
                ws = rng.exponential(1.0, block)
                wi = 0
            w = ws[wi]
            wi += 1
            if vi == block:
                vs = rng.exponential(1.0 / (1.0 - p), block)
                vi = 0
            v = vs[vi]
            vi += 1
            x += w
            y += w - v
        elif y >= c2 and x <= y + e2:
            reg = 0
            if vi == block:
                vs = rng.exponential(1.0 / (1.0 - p), block)
                vi = 0
            y -= vs[vi]
            vi += 1
        elif 0.0 <= x <= ce2 and y <= (x - e2 if x > e2 else 0.0):
            reg = 4
            if wi == block:
                ws = rng.exponential(1.0, block)
                wi = 0
            w = ws[wi]
            wi += 1
            if ui == block:
                us = rng.exponential(1.0 / p, block)
                ui = 0
            x += w - us[ui]
            ui += 1
            y += w
        else:
            reg = 2
            if ui == block:
                us = rng.exponential(1.0 / p, block)
                ui = 0
            x -= us[ui]
            ui += 1
        if t >= burn_in:
            counts[reg] += 1
    kept = steps - burn_in
    return RegionFrequencies(*(c / kept for c in counts))


class MatchedFractions(NamedTuple):
    total: float
    flex: float
    nonflex: float


def matched_fractions(freqs: RegionFrequencies, p: float) -> MatchedFractions:
    """Long-run matched fractions implied by region frequencies.

    total = (1 - 2 F_D) / (1 - F_D), flex = p F_E / (F_E + F_C),
    nonflex = (1 - p) F_B / (F_B + F_A).  The total equals flex + nonflex
    only in the long-run limit, so the identity is not enforced here.
    """
    if 1.0 - freqs.f_d <= 0.0:
        raise ValueError("region mass 1 - F_D vanishes; total fraction undefined")
    if freqs.f_e + freqs.f_c <= 0.0:
        raise ValueError("flexible region mass F_E + F_C vanishes; flex fraction undefined")
    if freqs.f_b + freqs.f_a <= 0.0:
        raise ValueError("inflexible region mass F_B + F_A vanishes; nonflex fraction undefined")
    total = (1.0 - 2.0 * freqs.f_d) / (1.0 - freqs.f_d)
    flex = p * freqs.f_e / (freqs.f_e + freqs.f_c)
    nonflex = (1.0 - p) * freqs.f_b / (freqs.f_b + freqs.f_a)
    return MatchedFractions(total=total, flex=flex, nonflex=nonflex)


@dataclass(frozen=True)
class GenerativeStats:
    """Outcome of one left-to-right generative run on realized point processes."""

    matched_total: int
    matched_flex: int
    matched_nonflex: int
    advanced_demand: int
    advanced_flex: int
    advanced_nonflex: int
    steps_total: int
    region_steps: dict[Region, int]
    matched_pairs: tuple[tuple[float, float, bool], ...]
    demand_points: np.ndarray
    flex_points: np.ndarray
    nonflex_points: np.ndarray

    def __post_init__(self) -> None:
        if self.matched_total != self.matched_flex + self.matched_nonflex:
            raise ValueError("matched_total must equal matched_flex + matched_nonflex")
        if self.matched_flex > self.advanced_flex or self.matched_nonflex > self.advanced_nonflex:
            raise ValueError("matched counts cannot exceed advanced counts")
        if self.matched_total > self.advanced_demand:
            raise ValueError("matched demand cannot exceed advanced demand")


def generative_process(
    params: DualRangeParams, n: int, rng: np.random.Generator
) -> GenerativeStats:
    """Scan ``[0, 1]`` left to right, matching demand to supply greedily.

    Demand, flexible supply, and inflexible supply points arrive as Poisson
    processes of rates ``n``, ``p n``, ``(1-p) n`` (exponential gaps scaled by
    ``1/n``; points past 1 belong to the next window and are dropped).  At
    each step the active agents, the leftmost pending point of each stream,
    are compared:

    * a supply node whose whole service window lies left of the demand is
      discarded (A for inflexible, C for flexible, whichever has the earlier
      deadline);
    * if the demand is in range of some supply, it is matched to the in-range
      node with the earlier deadline (B inflexible, E flexible);
    * if both supply nodes lie strictly ahead, the demand is skipped (D).

    The run terminates once every stream is exhausted.  The matched pair set
    coincides with the earliest-deadline greedy matching on the induced
    interval graph.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if not 0.0 < params.p < 1.0:
        raise DegenerateParameterError("generative process requires 0 < p < 1")
    p = params.p
    reach_nf = params.base / n
    reach_f = (params.base + params.extra) / n

    demand_pts: list[float] = []
    flex_pts: list[float] = []
    nonflex_pts: list[float] = []
    pairs: list[tuple[float, float, bool]] = []
    region_steps = {r: 0 for r in Region}
    adv_d = adv_f = adv_g = 0

    def spawn(prev: float, rate: float, sink: list[float]) -> float:
        pos = prev + rng.exponential(1.0 / rate) / n
        if pos > 1.0:
            return _INF
        sink.append(pos)
        return pos

    u = spawn(0.0, 1.0, demand_pts)
    vf = spawn(0.0, p, flex_pts)
    vg = spawn(0.0, 1.0 - p, nonflex_pts)

    while u < _INF or vf < _INF or vg < _INF:
        nf_in = (u < _INF and vg < _INF) and abs(u - vg) <= reach_nf
        f_in = (u < _INF and vf < _INF) and abs(u - vf) <= reach_f
        nf_behind = (not nf_in) and vg < u
        f_behind = (not f_in) and vf < u
        nf_ahead = (not nf_in) and vg > u
        # Flexible priority: its deadline (rightmost reachable point) is the
        # earlier one.  Ties go to the inflexible node.
        flex_prio = (vf + reach_f) < (vg + reach_nf)

        if nf_behind and not flex_prio:
            region_steps[Region.A] += 1
            adv_g += 1
            vg = spawn(vg, 1.0 - p, nonflex_pts)
        elif f_behind and flex_prio:
            region_steps[Region.C] += 1
            adv_f += 1
            vf = spawn(vf, p, flex_pts)
        elif nf_in and not flex_prio:
            region_steps[Region.B] += 1
            pairs.append((u, vg, False))
            adv_d += 1
            adv_g += 1
            u = spawn(u, 1.0, demand_pts)
            vg = spawn(vg, 1.0 - p, nonflex_pts)
        elif f_in and (flex_prio or nf_ahead):
            region_steps[Region.E] += 1
            pairs.append((u, vf, True))
            adv_d += 1
            adv_f += 1
            u = spawn(u, 1.0, demand_pts)
            vf = spawn(vf, p, flex_pts)
        else:
            region_steps[Region.D] += 1
            adv_d += 1
            u = spawn(u, 1.0, demand_pts)

    matched_flex = sum(1 for _, _, is_flex in pairs if is_flex)
    return GenerativeStats(
        matched_total=len(pairs),
        matched_flex=matched_flex,
        matched_nonflex=len(pairs) - matched_flex,
        advanced_demand=adv_d,
        advanced_flex=adv_f,
        advanced_nonflex=adv_g,
        steps_total=sum(region_steps.values()),
        region_steps=region_steps,
        matched_pairs=tuple(pairs),
        demand_points=np.asarray(demand_pts),
        flex_points=np.asarray(flex_pts),
        nonflex_points=np.asarray(nonflex_pts),
    )


def _phi(total_range: float, share: float) -> float:
    """Matched fraction of a single-range population thinned to a share of demand.

    Equals the base-0 closed form with range ``total_range`` and flexible
    fraction ``share``; continuous limits at share 0 (no demand, fraction 0)
    and share 1 (the fully balanced rate ``r / (r + 1/2)``).
    """
    if share <= 0.0:
        return 0.0
    if share >= 1.0:
        return total_range / (total_range + 0.5)
    g = math.exp(-2.0 * total_range * (1.0 - share))
    return share * (g - 1.0) / (share * g - 1.0)


def closed_form_base0(extra: float, p: float) -> float:
    """Matched fraction when the inflexible range is zero.

    Evaluates (e^{2 p extra} - e^{2 extra}) / (e^{2 p extra} - e^{2 extra}/p)
    in an overflow-safe form; the value lies in [0, 1).
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie strictly in (0, 1), got {p}")
    if extra < 0:
        raise ValueError(f"extra must be nonnegative, got {extra}")
    return _phi(extra, p)


def closed_form_extra0(base: float) -> float:
    """Matched fraction when all nodes share range ``base``: base / (base + 1/2)."""
    if base < 0:
        raise ValueError(f"base must be nonnegative, got {base}")
    return base / (base + 0.5)


def upper_bound(base: float, extra: float, p: float) -> float:
    """Matched-fraction upper bound: the uniform allocation with the same mean."""
    _validate_bound_params(base, extra, p)
    return closed_form_extra0(base + p * extra)


def lower_bound_q(base: float, extra: float, p: float, q: float) -> float:
    """Lower bound from splitting demand between the two supply types.

    A fraction ``q`` of demand is reserved for flexible supply and the rest
    for inflexible supply; each side is an unbalanced single-range market
    whose matched fraction is known in closed form.  Requires ``p < q <= 1``.
    """
    _validate_bound_params(base, extra, p)
    if not p < q <= 1.0:
        raise ValueError(f"q must lie in (p, 1], got q={q} with p={p}")
    nonflex_part = (1.0 - q) * _phi(base, (1.0 - q) / (1.0 - p)) if p < 1.0 else 0.0
    flex_part = q * _phi(base + extra, p / q)
    return nonflex_part + flex_part


def lower_bound_q_limit(base: float, extra: float, p: float) -> float:
    """The split-demand bound in its limiting form as the split approaches ``p``."""
    _validate_bound_params(base, extra, p)
    return (1.0 - p) * closed_form_extra0(base) + p * closed_form_extra0(base + extra)


def lower_bound_sup(base: float, extra: float, p: float) -> float:
    """Best split-demand lower bound over a 512-point grid plus the limiting form."""
    _validate_bound_params(base, extra, p)
    best = lower_bound_q_limit(base, extra, p)
    if p < 1.0:
        for j in range(1, 513):
            q = p + (1.0 - p) * j / 512.0
            val = lower_bound_q(base, extra, p, q)
            if val > best:
                best = val
    return best


def _validate_bound_params(base: float, extra: float, p: float) -> None:
    if base < 0 or extra < 0:
        raise ValueError("base and extra must be nonnegative")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")


def stationary_density_base0(x: float, y: float, extra: float, p: float) -> float:
    """Stationary density of the lead-time chain when the inflexible range is 0.

    Piecewise exponential over the surviving regions (A split along the
    diagonal, C, D, and the strip 0 <= x <= 2 extra below the axis); the
    normalizer makes the total mass 1.
    """
    if extra <= 0 or not 0.0 < p < 1.0:
        raise ValueError("requires extra > 0 and 0 < p < 1")
    e2 = 2.0 * extra
    g = math.exp(-e2 * (1.0 - p))
    norm = p * (1.0 - p) ** 2 / ((2.0 - p) - p * g)
    if y >= 0.0:
        if x <= y:
            return norm * math.exp(p * x - (1.0 + p) * y)
        if x <= y + e2:
            return norm * math.exp(-(1.0 - p) * x - p * y)
        return norm * math.exp(e2 - (2.0 - p) * x + (1.0 - p) * y)
    if x <= 0.0:
        return norm * math.exp(p * x + (1.0 - p) * y)
    if x <= e2:
        return norm * math.exp(-(1.0 - p) * x + (1.0 - p) * y)
    return norm * math.exp(e2 - (2.0 - p) * x + (1.0 - p) * y)


def stationary_density_extra0(x: float, y: float, base: float, p: float) -> float:
    """Stationary density of the lead-time chain when the flexibility increment is 0.

    Piecewise exponential over the surviving regions (above/below the
    diagonal, split at heights 0 and 2 base); the normalizer is
    p (1-p) / (2 (1 + base)).
    """
    if base <= 0 or not 0.0 < p < 1.0:
        raise ValueError("requires base > 0 and 0 < p < 1")
    c2 = 2.0 * base
    norm = p * (1.0 - p) / (2.0 * (1.0 + base))
    if x <= y:
        if y >= c2:
            return norm * math.exp(c2 + p * x - (1.0 + p) * y)
        if y >= 0.0:
            return norm * math.exp(p * x - p * y)
        return norm * math.exp(p * x + (1.0 - p) * y)
    if x <= 0.0:
        return norm * math.exp(p * x + (1.0 - p) * y)
    if x <= c2:
        return norm * math.exp(-(1.0 - p) * x + (1.0 - p) * y)
    return norm * math.exp(c2 - (2.0 - p) * x + (1.0 - p) * y)
