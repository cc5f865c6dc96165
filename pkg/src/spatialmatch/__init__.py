"""Spatial supply-demand matching simulations.

Bipartite geometric compatibility graphs on the unit hypercube, maximum and
greedy matchings, majorization machinery for comparing service-range
allocations, the dual-range lead-time Markov chain with its closed forms and
bounds, and a seeded Monte Carlo experiment harness.
"""

from .dualrange import (
    ChainState,
    DegenerateParameterError,
    DualRangeParams,
    Event,
    GenerativeStats,
    MatchedFractions,
    Region,
    RegionFrequencies,
    classify_region,
    closed_form_base0,
    closed_form_extra0,
    generative_process,
    lower_bound_q,
    lower_bound_q_limit,
    lower_bound_sup,
    matched_fractions,
    simulate_frequencies,
    stationary_density_base0,
    stationary_density_extra0,
    step,
    upper_bound,
)
from .experiments import (
    CounterexampleSpec,
    ExperimentConfig,
    FamilyKind,
    FamilySpec,
    ParamSweep,
    SweepResult,
    config_from_dict,
    config_to_dict,
    default_bounds_sweeps,
    default_markov_sweeps,
    family_ranges,
    run_bounds_validation,
    run_counterexample,
    run_experiment,
    run_markov_validation,
    run_radius_vs_volume,
    run_uniformity_sweep,
    table3_families,
    table5_families,
    write_csv,
)
from .geometry import (
    Density1D,
    GeoBipartiteGraph,
    Parametrization,
    PiecewiseLinearDensity,
    ServiceRanges,
    TrimmingGrid,
    UniformDensity,
    build_graph,
    connection_thresholds,
    sample_density_1d,
    sample_uniform_points,
    trim,
)
from .majorization import (
    MajorizationError,
    TTransformDecomposition,
    TTransformStep,
    apply_t_transform,
    majorizes,
    t_transform_decompose,
    uniformize,
)
from .matching import (
    DPlusSet,
    Matching,
    NotMaximumMatchingError,
    delta_window_measure,
    dplus,
    greedy_interval,
    hopcroft_karp,
)

__version__ = "0.1.0"
