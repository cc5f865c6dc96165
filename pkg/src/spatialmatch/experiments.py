"""Seeded Monte Carlo experiment harness.

Four experiment families are provided, each emitting a tabular
:class:`SweepResult` ready for CSV output:

* uniformity sweeps: matching fraction against the inequality knob ``alpha``
  for one-parameter dual-range families with a fixed mean range;
* radius-vs-volume: the same sweeps under both service-region
  parametrizations at k=2, on shared random inputs;
* markov validation: exact matching fractions against the lead-time chain's
  stationary formula along one-parameter sweeps;
* bounds validation: simulated fractions bracketed by the analytic bounds;
* a clustered-support counterexample where concentrating the range budget
  beats spreading it uniformly.

Every trial derives its generator from the master seed through a splittable
spawn key (stream, family, grid point, trial), so reruns are bit-identical
and results do not depend on worker scheduling.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .dualrange import (
    DualRangeParams,
    closed_form_base0,
    closed_form_extra0,
    lower_bound_sup,
    matched_fractions,
    simulate_frequencies,
    upper_bound,
)
from .geometry import Parametrization, ServiceRanges, build_graph, sample_uniform_points
from .matching import hopcroft_karp

__all__ = [
    "FamilyKind",
    "FamilySpec",
    "ParamSweep",
    "CounterexampleSpec",
    "ExperimentConfig",
    "SweepResult",
    "table3_families",
    "table5_families",
    "default_markov_sweeps",
    "default_bounds_sweeps",
    "family_ranges",
    "run_uniformity_sweep",
    "run_radius_vs_volume",
    "run_markov_validation",
    "run_bounds_validation",
    "run_counterexample",
    "run_experiment",
    "config_from_dict",
    "config_to_dict",
    "write_csv",
]

# Stream tags keep the per-trial spawn keys of different experiments disjoint.
_STREAM_UNIFORMITY = 0
_STREAM_RVV_SHARED = 1
_STREAM_MARKOV_MC = 2
_STREAM_MARKOV_CHAIN = 3
_STREAM_BOUNDS_MC = 4
_STREAM_COUNTEREXAMPLE = 5


class FamilyKind(Enum):
    FIXED_BASE = "fixed_base"
    FIXED_EXTRA = "fixed_extra"
    FIXED_P = "fixed_p"


@dataclass(frozen=True)
class FamilySpec:
    """One-parameter family of dual-range allocations with constant mean.

    ``alpha`` in [0, 1] tunes inequality upward while the mean range
    ``base + p * extra`` stays pinned at ``mean_range``.  Depending on
    ``kind``, the fixed quantity is the base range, the increment, or the
    flexible fraction; ``lo``/``hi`` bound the linearly varied parameter
    (the flexible fraction for the first two kinds, the base range for the
    third).
    """

    kind: FamilyKind
    mean_range: float
    fixed: float
    lo: float
    hi: float
    label: str = ""

    def __post_init__(self) -> None:
        if self.mean_range <= 0:
            raise ValueError("mean_range must be positive")
        if not self.label:
            object.__setattr__(self, "label", self.kind.value)
        for alpha in (0.0, 1.0):
            self.params_at(alpha)

    def params_at(self, alpha: float) -> tuple[float, float, float]:
        """Map ``alpha`` to (base, extra, p); raises if any value leaves range."""
        if not 0.0 <= alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
        if self.kind is FamilyKind.FIXED_BASE:
            base = self.fixed
            p = self.hi - alpha * (self.hi - self.lo)
            if p <= 0.0:
                raise ValueError(f"family {self.label}: p({alpha}) = {p} is not positive")
            extra = (self.mean_range - base) / p
        elif self.kind is FamilyKind.FIXED_EXTRA:
            extra = self.fixed
            p = self.lo + alpha * (self.hi - self.lo)
            base = self.mean_range - p * extra
        else:
            p = self.fixed
            base = self.hi - alpha * (self.hi - self.lo)
            if p <= 0.0:
                raise ValueError(f"family {self.label}: fixed p must be positive")
            extra = (self.mean_range - base) / p
        if base < 0 or extra < 0 or not 0.0 <= p <= 1.0:
            raise ValueError(
                f"family {self.label}: alpha={alpha} implies invalid "
                f"(base={base}, extra={extra}, p={p})"
            )
        return base, extra, p


def family_ranges(
    spec: FamilySpec, alpha: float, n: int, rng: np.random.Generator
) -> ServiceRanges:
    """Draw n i.i.d. two-point service ranges from the family at ``alpha``."""
    base, extra, p = spec.params_at(alpha)
    flexible = rng.random(n) < p
    values = base + extra * flexible
    cap = base + extra if base + extra > 0 else 1.0
    return ServiceRanges(values, cap)


def table3_families(k: int) -> tuple[FamilySpec, FamilySpec, FamilySpec]:
    """Default sweep families for the uniformity experiments, by dimension."""
    if k == 1:
        return (
            FamilySpec(FamilyKind.FIXED_BASE, 1.0, 0.5, 0.2, 0.8),
            FamilySpec(FamilyKind.FIXED_EXTRA, 1.0, 0.6, 0.01, 0.5),
            FamilySpec(FamilyKind.FIXED_P, 1.0, 0.3, 0.5, 1.0),
        )
    if k == 2:
        return (
            FamilySpec(FamilyKind.FIXED_BASE, 0.15, 0.025, 0.2, 0.8),
            FamilySpec(FamilyKind.FIXED_EXTRA, 0.15, 0.3, 0.0, 0.5),
            FamilySpec(FamilyKind.FIXED_P, 0.15, 0.5, 0.006, 0.12),
        )
    if k == 3:
        return (
            FamilySpec(FamilyKind.FIXED_BASE, 0.1, 0.02, 0.2, 0.8),
            FamilySpec(FamilyKind.FIXED_EXTRA, 0.1, 0.2, 0.0, 0.5),
            FamilySpec(FamilyKind.FIXED_P, 0.1, 0.5, 0.005, 0.1),
        )
    raise ValueError(f"no default families for k={k}")


def table5_families() -> dict[Parametrization, tuple[FamilySpec, ...]]:
    """Default k=2 families for the radius-vs-volume comparison."""
    return {
        Parametrization.RADIUS: (
            FamilySpec(FamilyKind.FIXED_BASE, 0.3, 0.0, 0.2, 0.8),
            FamilySpec(FamilyKind.FIXED_EXTRA, 0.4, 0.8, 0.0, 0.5),
            FamilySpec(FamilyKind.FIXED_P, 0.4, 0.5, 0.02, 0.36),
        ),
        Parametrization.VOLUME: (
            FamilySpec(FamilyKind.FIXED_BASE, 0.127, 0.0, 0.2, 0.8),
            FamilySpec(FamilyKind.FIXED_EXTRA, 0.15, 0.09, 0.0, 0.5),
            FamilySpec(FamilyKind.FIXED_P, 0.21, 0.5, 0.011, 0.191),
        ),
    }


@dataclass(frozen=True)
class ParamSweep:
    """A one-dimensional sweep of the dual-range parameters.

    ``name`` selects which of base/extra/p runs over ``grid``; the other two
    stay at the values given here.
    """

    name: str
    grid: tuple[float, ...]
    base: float
    extra: float
    p: float

    def __post_init__(self) -> None:
        if self.name not in ("base", "extra", "p"):
            raise ValueError(f"sweep name must be base, extra or p, got {self.name!r}")
        object.__setattr__(self, "grid", tuple(float(v) for v in self.grid))

    def triple_at(self, value: float) -> tuple[float, float, float]:
        base, extra, p = self.base, self.extra, self.p
        if self.name == "base":
            base = value
        elif self.name == "extra":
            extra = value
        else:
            p = value
        return base, extra, p


def _grid(lo: float, hi: float, count: int = 10) -> tuple[float, ...]:
    return tuple(np.linspace(lo, hi, count).tolist())


def default_markov_sweeps() -> tuple[ParamSweep, ...]:
    return (
        ParamSweep("base", _grid(0.1, 3.0), base=0.0, extra=1.0, p=0.5),
        ParamSweep("extra", _grid(0.0, 3.0), base=1.0, extra=0.0, p=0.5),
        ParamSweep("p", _grid(0.05, 0.95), base=1.0, extra=1.0, p=0.0),
    )


def default_bounds_sweeps() -> tuple[ParamSweep, ...]:
    return (
        ParamSweep("base", _grid(0.1, 3.0), base=0.0, extra=2.0, p=0.6),
        ParamSweep("extra", _grid(0.0, 3.0), base=0.25, extra=0.0, p=0.5),
        ParamSweep("p", _grid(0.05, 0.95), base=1.0, extra=1.0, p=0.0),
    )


@dataclass(frozen=True)
class CounterexampleSpec:
    """Clustered 1-d supports separated by a gap no uniform allocation can cross.

    Supply is uniform on ``[0, cluster_width]``, demand uniform on
    ``[cluster_width + gap, cluster_width + gap + demand_width]``.  The
    uniform arm gives every node range ``mean_range``; the concentrated arm
    spends the identical budget on as few nodes as possible, each with enough
    range to reach the whole demand cluster.
    """

    mean_range: float = 24.0
    cluster_width: float = 0.3
    gap: float = 0.3
    demand_width: float = 0.1

    def __post_init__(self) -> None:
        if min(self.mean_range, self.cluster_width, self.gap, self.demand_width) <= 0:
            raise ValueError("all counterexample parameters must be positive")
        if self.cluster_width + self.gap + self.demand_width > 1.0:
            raise ValueError("supports must fit inside [0, 1]")


@dataclass(frozen=True)
class ExperimentConfig:
    """Shared configuration for all experiments; unused fields are ignored.

    ``seed`` is mandatory: no experiment ever consults the wall clock or
    process entropy.
    """

    mode: str
    seed: int
    n: int = 400
    m: int | None = None
    k: int = 1
    trials: int = 1000
    alpha_grid: tuple[float, ...] = field(default_factory=lambda: _grid(0.0, 1.0))
    parametrization: Parametrization = Parametrization.VOLUME
    families: tuple[FamilySpec, ...] = ()
    sweeps: tuple[ParamSweep, ...] = ()
    chain_steps: int = 10**6
    counterexample: CounterexampleSpec = field(default_factory=CounterexampleSpec)
    workers: int = 1

    def __post_init__(self) -> None:
        if self.mode not in ("uniformity", "radius_vs_volume", "markov", "bounds", "counterexample"):
            raise ValueError(f"unknown experiment mode {self.mode!r}")
        if not isinstance(self.seed, int):
            raise ValueError("seed must be an integer")
        if self.n < 1 or (self.m is not None and self.m < 0):
            raise ValueError("population sizes must be positive")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        grid = tuple(float(a) for a in self.alpha_grid)
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("alpha_grid must increase strictly")
        if grid and (grid[0] < 0.0 or grid[-1] > 1.0):
            raise ValueError("alpha_grid must lie within [0, 1]")
        object.__setattr__(self, "alpha_grid", grid)
        object.__setattr__(self, "families", tuple(self.families))
        object.__setattr__(self, "sweeps", tuple(self.sweeps))
        if self.workers < 1:
            raise ValueError("workers must be at least 1")

    @property
    def demand_count(self) -> int:
        return self.n if self.m is None else self.m


@dataclass(frozen=True)
class SweepResult:
    """A small column-named table of experiment outputs."""

    columns: tuple[str, ...]
    rows: tuple[tuple, ...]

    def column(self, name: str) -> list:
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]

    def select(self, **filters) -> "SweepResult":
        """Rows whose named columns equal the given values."""
        idxs = {self.columns.index(k): v for k, v in filters.items()}
        rows = tuple(r for r in self.rows if all(r[i] == v for i, v in idxs.items()))
        return SweepResult(self.columns, rows)


def _format_cell(value) -> str:
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.9g}"
    return str(value)


def write_csv(result: SweepResult, path) -> None:
    """Write a sweep table as RFC-4180 CSV with floats at 9 significant digits."""
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\r\n")
            writer.writerow(result.columns)
            for row in result.rows:
                writer.writerow([_format_cell(v) for v in row])
    except OSError as exc:
        raise OSError(f"failed to write CSV to {path}: {exc}") from exc


def _trial_rng(seed: int, key: tuple[int, ...]) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def _summary(fracs: np.ndarray) -> tuple[float, float, float]:
    mean = float(fracs.mean())
    std = float(fracs.std(ddof=1)) if fracs.size > 1 else 0.0
    return mean, std, std / math.sqrt(fracs.size)


def _pool_map(fn, tasks: list, workers: int) -> list:
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, tasks))
    return [fn(task) for task in tasks]


# ---------------------------------------------------------------------------
# Uniformity sweep


def _uniformity_point(args) -> np.ndarray:
    seed, fi, ai, spec, alpha, n, m, k, trials, parametrization = args
    fracs = np.empty(trials)
    for t in range(trials):
        rng = _trial_rng(seed, (_STREAM_UNIFORMITY, fi, ai, t))
        supply = sample_uniform_points(n, k, rng)
        demand = sample_uniform_points(m, k, rng)
        ranges = family_ranges(spec, alpha, n, rng)
        graph = build_graph(supply, ranges, demand, parametrization)
        fracs[t] = hopcroft_karp(graph).size / n
    return fracs


_UNIFORMITY_COLUMNS = (
    "family",
    "k",
    "alpha",
    "base",
    "extra",
    "p",
    "mean_fraction",
    "std_dev",
    "std_err",
    "trials",
)


def run_uniformity_sweep(config: ExperimentConfig) -> SweepResult:
    """Average matching fraction per ``alpha`` for each family, fresh draws per trial."""
    families = config.families or table3_families(config.k)
    tasks = [
        (config.seed, fi, ai, spec, alpha, config.n, config.demand_count, config.k,
         config.trials, config.parametrization)
        for fi, spec in enumerate(families)
        for ai, alpha in enumerate(config.alpha_grid)
    ]
    results = _pool_map(_uniformity_point, tasks, config.workers)
    rows = []
    for (seed, fi, ai, spec, alpha, n, m, k, trials, _), fracs in zip(tasks, results):
        base, extra, p = spec.params_at(alpha)
        mean, std, se = _summary(fracs)
        rows.append((spec.label, k, alpha, base, extra, p, mean, std, se, trials))
    return SweepResult(_UNIFORMITY_COLUMNS, tuple(rows))


# ---------------------------------------------------------------------------
# Radius vs volume


def _rvv_point(args) -> tuple[np.ndarray, np.ndarray, float]:
    seed, fi, ai, spec_vol, spec_rad, alpha, n, m, trials = args
    frac_vol = np.empty(trials)
    frac_rad = np.empty(trials)
    checksum = 0.0
    bv, ev, pv = spec_vol.params_at(alpha)
    br, er, pr = spec_rad.params_at(alpha)
    for t in range(trials):
        rng = _trial_rng(seed, (_STREAM_RVV_SHARED, fi, ai, t))
        supply = sample_uniform_points(n, 2, rng)
        demand = sample_uniform_points(m, 2, rng)
        bern = rng.random(n)
        checksum += float(supply.sum() + demand.sum())
        vol_values = bv + ev * (bern < pv)
        rad_values = br + er * (bern < pr)
        g_vol = build_graph(
            supply, ServiceRanges.of(vol_values, cap=max(bv + ev, 1.0)), demand,
            Parametrization.VOLUME,
        )
        g_rad = build_graph(
            supply, ServiceRanges.of(rad_values, cap=max(br + er, 1.0)), demand,
            Parametrization.RADIUS,
        )
        frac_vol[t] = hopcroft_karp(g_vol).size / n
        frac_rad[t] = hopcroft_karp(g_rad).size / n
    return frac_vol, frac_rad, checksum


_RVV_COLUMNS = (
    "family",
    "parametrization",
    "k",
    "alpha",
    "base",
    "extra",
    "p",
    "mean_fraction",
    "std_dev",
    "std_err",
    "trials",
    "points_checksum",
)


def run_radius_vs_volume(config: ExperimentConfig) -> SweepResult:
    """Paired volume/radius sweeps at k=2 on identical random inputs per trial."""
    if config.k != 2:
        raise ValueError("the radius-vs-volume comparison is defined for k=2")
    table = table5_families()
    fams_vol = table[Parametrization.VOLUME]
    fams_rad = table[Parametrization.RADIUS]
    tasks = [
        (config.seed, fi, ai, fams_vol[fi], fams_rad[fi], alpha, config.n,
         config.demand_count, config.trials)
        for fi in range(len(fams_vol))
        for ai, alpha in enumerate(config.alpha_grid)
    ]
    results = _pool_map(_rvv_point, tasks, config.workers)
    rows = []
    for (seed, fi, ai, spec_vol, spec_rad, alpha, n, m, trials), out in zip(tasks, results):
        frac_vol, frac_rad, checksum = out
        for spec, fracs, tag in (
            (spec_vol, frac_vol, Parametrization.VOLUME),
            (spec_rad, frac_rad, Parametrization.RADIUS),
        ):
            base, extra, p = spec.params_at(alpha)
            mean, std, se = _summary(fracs)
            rows.append(
                (spec.label, tag.value, 2, alpha, base, extra, p, mean, std, se, trials, checksum)
            )
    return SweepResult(_RVV_COLUMNS, tuple(rows))


# ---------------------------------------------------------------------------
# Markov-formula validation and bounds


def _dual_range_fractions(args) -> np.ndarray:
    seed, stream, si, vi, base, extra, p, n, m, trials = args
    fracs = np.empty(trials)
    for t in range(trials):
        rng = _trial_rng(seed, (stream, si, vi, t))
        supply = rng.random((n, 1))
        demand = rng.random((m, 1))
        flexible = rng.random(n) < p
        values = base + extra * flexible
        cap = base + extra if base + extra > 0 else 1.0
        graph = build_graph(supply, ServiceRanges(values, cap), demand)
        fracs[t] = hopcroft_karp(graph).size / n
    return fracs


def _formula_fraction(base: float, extra: float, p: float, chain_steps: int, seed: int,
                      key: tuple[int, ...]) -> float:
    """Stationary-chain matched fraction; degenerate mixes fall back to closed forms."""
    if p <= 0.0:
        return closed_form_extra0(base)
    if p >= 1.0:
        return closed_form_extra0(base + extra)
    freqs = simulate_frequencies(
        DualRangeParams(base, extra, p), chain_steps, rng=_trial_rng(seed, key)
    )
    return matched_fractions(freqs, p).total


_MARKOV_COLUMNS = (
    "sweep",
    "value",
    "base",
    "extra",
    "p",
    "mean_fraction",
    "std_dev",
    "std_err",
    "trials",
    "formula_fraction",
    "closed_form",
)


def run_markov_validation(config: ExperimentConfig) -> SweepResult:
    """Exact matching fractions against the stationary-frequency formula, k=1."""
    if config.k != 1:
        raise ValueError("the chain validation is defined for k=1")
    sweeps = config.sweeps or default_markov_sweeps()
    tasks = [
        (config.seed, _STREAM_MARKOV_MC, si, vi, *sweep.triple_at(value), config.n,
         config.demand_count, config.trials)
        for si, sweep in enumerate(sweeps)
        for vi, value in enumerate(sweep.grid)
    ]
    results = _pool_map(_dual_range_fractions, tasks, config.workers)
    rows = []
    i = 0
    for si, sweep in enumerate(sweeps):
        for vi, value in enumerate(sweep.grid):
            base, extra, p = sweep.triple_at(value)
            mean, std, se = _summary(results[i])
            i += 1
            formula = _formula_fraction(
                base, extra, p, config.chain_steps, config.seed,
                (_STREAM_MARKOV_CHAIN, si, vi),
            )
            if extra == 0.0 or p <= 0.0:
                closed = closed_form_extra0(base)
            elif p >= 1.0:
                closed = closed_form_extra0(base + extra)
            elif base == 0.0:
                closed = closed_form_base0(extra, p)
            else:
                closed = ""
            rows.append((sweep.name, value, base, extra, p, mean, std, se,
                         config.trials, formula, closed))
    return SweepResult(_MARKOV_COLUMNS, tuple(rows))


_BOUNDS_COLUMNS = (
    "panel",
    "value",
    "base",
    "extra",
    "p",
    "mean_fraction",
    "std_dev",
    "std_err",
    "trials",
    "lower_bound",
    "upper_bound",
)


def run_bounds_validation(config: ExperimentConfig) -> SweepResult:
    """Simulated matched fractions with the analytic bracket, k=1."""
    if config.k != 1:
        raise ValueError("the bounds validation is defined for k=1")
    sweeps = config.sweeps or default_bounds_sweeps()
    tasks = [
        (config.seed, _STREAM_BOUNDS_MC, si, vi, *sweep.triple_at(value), config.n,
         config.demand_count, config.trials)
        for si, sweep in enumerate(sweeps)
        for vi, value in enumerate(sweep.grid)
    ]
    results = _pool_map(_dual_range_fractions, tasks, config.workers)
    rows = []
    i = 0
    for si, sweep in enumerate(sweeps):
        for vi, value in enumerate(sweep.grid):
            base, extra, p = sweep.triple_at(value)
            mean, std, se = _summary(results[i])
            i += 1
            rows.append((sweep.name, value, base, extra, p, mean, std, se, config.trials,
                         lower_bound_sup(base, extra, p), upper_bound(base, extra, p)))
    return SweepResult(_BOUNDS_COLUMNS, tuple(rows))


# ---------------------------------------------------------------------------
# Counterexample


def _counterexample_arm(spec: CounterexampleSpec, n: int) -> dict[str, np.ndarray]:
    budget = spec.mean_range * n
    span = spec.cluster_width + spec.gap + spec.demand_width
    big = span * n  # reaches the whole demand cluster from anywhere in the supply cluster
    count = int(budget // big)
    uniform = np.full(n, spec.mean_range)
    concentrated = np.zeros(n)
    concentrated[:count] = big
    remainder = budget - count * big
    if count < n and remainder > 0:
        concentrated[count] = remainder
    return {"uniform": uniform, "concentrated": concentrated}


_COUNTEREXAMPLE_COLUMNS = (
    "arm",
    "n",
    "trials",
    "mean_fraction",
    "std_dev",
    "std_err",
    "budget_total",
)


def run_counterexample(config: ExperimentConfig) -> SweepResult:
    """Uniform vs concentrated allocation on gap-separated supports, shared instances."""
    spec = config.counterexample
    n, m = config.n, config.demand_count
    arms = _counterexample_arm(spec, n)
    budgets = {arm: float(v.sum()) for arm, v in arms.items()}
    fracs = {arm: np.empty(config.trials) for arm in arms}
    for t in range(config.trials):
        rng = _trial_rng(config.seed, (_STREAM_COUNTEREXAMPLE, 0, 0, t))
        supply = (rng.random(n) * spec.cluster_width).reshape(-1, 1)
        demand = (spec.cluster_width + spec.gap + rng.random(m) * spec.demand_width).reshape(-1, 1)
        for arm, values in arms.items():
            cap = float(values.max()) if values.max() > 0 else 1.0
            graph = build_graph(supply, ServiceRanges(values, cap), demand)
            fracs[arm][t] = hopcroft_karp(graph).size / n
    rows = []
    for arm in ("uniform", "concentrated"):
        mean, std, se = _summary(fracs[arm])
        rows.append((arm, n, config.trials, mean, std, se, budgets[arm]))
    return SweepResult(_COUNTEREXAMPLE_COLUMNS, tuple(rows))


def run_experiment(config: ExperimentConfig) -> SweepResult:
    """Dispatch on ``config.mode``."""
    runners = {
        "uniformity": run_uniformity_sweep,
        "radius_vs_volume": run_radius_vs_volume,
        "markov": run_markov_validation,
        "bounds": run_bounds_validation,
        "counterexample": run_counterexample,
    }
    return runners[config.mode](config)


# ---------------------------------------------------------------------------
# JSON configuration


def config_to_dict(config: ExperimentConfig) -> dict:
    return {
        "mode": config.mode,
        "seed": config.seed,
        "n": config.n,
        "m": config.m,
        "k": config.k,
        "trials": config.trials,
        "alpha_grid": list(config.alpha_grid),
        "parametrization": config.parametrization.value,
        "families": [
            {
                "kind": f.kind.value,
                "mean_range": f.mean_range,
                "fixed": f.fixed,
                "lo": f.lo,
                "hi": f.hi,
                "label": f.label,
            }
            for f in config.families
        ],
        "sweeps": [
            {"name": s.name, "grid": list(s.grid), "base": s.base, "extra": s.extra, "p": s.p}
            for s in config.sweeps
        ],
        "chain_steps": config.chain_steps,
        "counterexample": {
            "mean_range": config.counterexample.mean_range,
            "cluster_width": config.counterexample.cluster_width,
            "gap": config.counterexample.gap,
            "demand_width": config.counterexample.demand_width,
        },
        "workers": config.workers,
    }


def config_from_dict(data: dict) -> ExperimentConfig:
    """Build a config from parsed JSON; unknown keys are rejected by name."""
    known = {
        "mode", "seed", "n", "m", "k", "trials", "alpha_grid", "parametrization",
        "families", "sweeps", "chain_steps", "counterexample", "workers",
    }
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config field(s): {', '.join(sorted(unknown))}")
    kwargs = dict(data)
    if "parametrization" in kwargs:
        kwargs["parametrization"] = Parametrization(kwargs["parametrization"])
    if "families" in kwargs:
        kwargs["families"] = tuple(
            FamilySpec(
                kind=FamilyKind(f["kind"]),
                mean_range=f["mean_range"],
                fixed=f["fixed"],
                lo=f["lo"],
                hi=f["hi"],
                label=f.get("label", ""),
            )
            for f in kwargs["families"]
        )
    if "sweeps" in kwargs:
        kwargs["sweeps"] = tuple(ParamSweep(**s) for s in kwargs["sweeps"])
    if "alpha_grid" in kwargs:
        kwargs["alpha_grid"] = tuple(kwargs["alpha_grid"])
    if "counterexample" in kwargs:
        kwargs["counterexample"] = CounterexampleSpec(**kwargs["counterexample"])
    return ExperimentConfig(**kwargs)
