"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Statistical criteria run at desk scale (1000 trials instead of 10^4) with the
tolerances fixed below; every tolerance is stated inline next to its
assertion.  Run with ``pytest tests/test_acceptance.py -v -s`` to see the
per-criterion lines.  The figure-rendering criterion (15) belongs to the
separate plots package and runs in its own test suite; everything here is
independent of it.
"""

from __future__ import annotations

import math
import time

import numpy as np
import pytest
from scipy import stats as sps

from spatialmatch.dualrange import (
    DualRangeParams,
    closed_form_base0,
    closed_form_extra0,
    generative_process,
    matched_fractions,
    simulate_frequencies,
    stationary_density_base0,
    stationary_density_extra0,
)
from spatialmatch.experiments import (
    ExperimentConfig,
    ParamSweep,
    run_bounds_validation,
    run_markov_validation,
    run_radius_vs_volume,
    run_uniformity_sweep,
)
from spatialmatch.geometry import ServiceRanges, build_graph, trim
from spatialmatch.matching import (
    delta_window_measure,
    dplus,
    greedy_interval,
    hopcroft_karp,
)

from conftest import brute_force_matching_number
from oracles_dualrange import (
    generative_matches_greedy,
    kernel_balance_base0,
    kernel_balance_extra0,
    region_masses_base0,
    region_masses_extra0,
)
from test_majorization import random_majorized_pair, reconstruction_report
from test_matching import graph_from_adjacency


def announce(number: int, ok: bool, detail: str) -> None:
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] criterion {number:2d}: {detail}", flush=True)
    assert ok, f"criterion {number}: {detail}"


def _rng(*key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(20240817, spawn_key=key))


def _dual_instance(rng, n, base, extra, p):
    supply = rng.random((n, 1))
    demand = rng.random((n, 1))
    flexible = rng.random(n) < p
    values = base + extra * flexible
    cap = base + extra if base + extra > 0 else 1.0
    return build_graph(supply, ServiceRanges(values, cap), demand)


def _dual_mc_mean(stream, base, extra, p, n=400, trials=1000) -> float:
    total = 0.0
    for t in range(trials):
        graph = _dual_instance(_rng(stream, t), n, base, extra, p)
        total += hopcroft_karp(graph).size / n
    return total / trials


def test_criterion_01_greedy_optimality():
    start = time.perf_counter()
    n = 200
    mismatches = 0
    for seed in range(1000):
        rng = _rng(1, seed)
        supply = rng.random((n, 1))
        demand = rng.random((n, 1))
        values = rng.random(n) * 2.0
        graph = build_graph(supply, ServiceRanges(values, 2.0), demand)
        if greedy_interval(graph).size != hopcroft_karp(graph).size:
            mismatches += 1
    elapsed = time.perf_counter() - start
    announce(
        1,
        mismatches == 0 and elapsed < 30.0,
        f"greedy == hopcroft-karp on 1000 instances (n=m=200), "
        f"{mismatches} mismatches, {elapsed:.1f}s (< 30s)",
    )


def test_criterion_02_generative_greedy_agreement():
    start = time.perf_counter()
    params = DualRangeParams(1.0, 1.0, 0.5)
    disagreements = 0
    for seed in range(200):
        stats = generative_process(params, 200, _rng(2, seed))
        if not generative_matches_greedy(stats, params, 200):
            disagreements += 1
    elapsed = time.perf_counter() - start
    announce(
        2,
        disagreements == 0 and elapsed < 30.0,
        f"generative matched pairs == greedy matching on 200 realizations, "
        f"{disagreements} disagreements, {elapsed:.1f}s (< 30s)",
    )


def test_criterion_03_equal_ranges_closed_form():
    start = time.perf_counter()
    mean = _dual_mc_mean(3, base=1.0, extra=0.0, p=0.5)
    target = closed_form_extra0(1.0)
    gap = abs(mean - target)
    elapsed = time.perf_counter() - start
    announce(
        3,
        gap < 0.02 and elapsed < 120.0,
        f"all-equal-range fraction {mean:.4f} vs 2/3, gap {gap:.4f} (< 0.02), "
        f"{elapsed:.1f}s (< 2min)",
    )


def test_criterion_04_zero_base_closed_form():
    start = time.perf_counter()
    mean = _dual_mc_mean(4, base=0.0, extra=1.0, p=0.5)
    target = closed_form_base0(1.0, 0.5)
    assert target == pytest.approx(0.38730, abs=5e-6)
    gap = abs(mean - target)
    elapsed = time.perf_counter() - start
    announce(
        4,
        gap < 0.02 and elapsed < 120.0,
        f"zero-base fraction {mean:.4f} vs {target:.5f}, gap {gap:.4f} (< 0.02), "
        f"{elapsed:.1f}s (< 2min)",
    )


def test_criterion_05_stationary_formula_consistency():
    triples = [
        (0.5, 1.0, 0.5),
        (2.0, 1.0, 0.5),
        (1.0, 0.5, 0.5),
        (1.0, 2.0, 0.5),
        (1.0, 1.0, 0.25),
        (1.0, 1.0, 0.75),
    ]
    gaps = []
    for idx, (base, extra, p) in enumerate(triples):
        mc = _dual_mc_mean(50 + idx, base, extra, p)
        freqs = simulate_frequencies(
            DualRangeParams(base, extra, p), 10**6, rng=_rng(5, idx)
        )
        formula = matched_fractions(freqs, p).total
        gaps.append(abs(mc - formula))
    worst = max(gaps)
    announce(
        5,
        worst < 0.02,
        f"six parameter triples: max |monte-carlo - formula| = {worst:.4f} (< 0.02)",
    )


def test_criterion_06_balance_and_occupation():
    params = DualRangeParams(1.0, 1.0, 0.5)
    freqs = simulate_frequencies(params, 10**6, rng=_rng(6, 0))
    balance = abs(freqs.f_a + freqs.f_c - freqs.f_d)
    stats = generative_process(params, 500_000, _rng(6, 1))
    t = stats.steps_total
    gaps = (
        abs(stats.advanced_demand / t - (freqs.f_b + freqs.f_d + freqs.f_e)),
        abs(stats.advanced_flex / t - (freqs.f_c + freqs.f_e)),
        abs(stats.advanced_nonflex / t - (freqs.f_a + freqs.f_b)),
    )
    announce(
        6,
        balance < 0.005 and max(gaps) < 0.01,
        f"|F_A+F_C-F_D| = {balance:.4f} (< 0.005); advance-fraction gaps "
        f"{tuple(round(g, 4) for g in gaps)} (each < 0.01)",
    )


def test_criterion_07_stationary_densities():
    masses_b0 = region_masses_base0(1.0, 0.5)
    masses_e0 = region_masses_extra0(1.0, 0.5)
    mass_errs = (abs(sum(masses_b0.values()) - 1.0), abs(sum(masses_e0.values()) - 1.0))
    fd_b0_target = 0.5 * math.e**2 / (1.5 * math.e**2 - 0.5 * math.e)
    fd_errs = (
        abs(masses_b0["D"] - fd_b0_target),
        abs(masses_e0["D"] - 0.25),
    )
    rng = _rng(7, 0)
    kernel_err = 0.0
    for _ in range(20):
        x2 = float(rng.uniform(-2.5, 4.5))
        y2 = float(rng.uniform(-2.5, 4.5))
        kernel_err = max(
            kernel_err,
            abs(kernel_balance_base0(x2, y2, 1.0, 0.5) - stationary_density_base0(x2, y2, 1.0, 0.5)),
            abs(kernel_balance_extra0(x2, y2, 1.0, 0.5) - stationary_density_extra0(x2, y2, 1.0, 0.5)),
        )
    announce(
        7,
        max(mass_errs) < 1e-3 and max(fd_errs) < 1e-3 and kernel_err < 1e-3,
        f"density masses off by {tuple(f'{e:.1e}' for e in mass_errs)}, skip-region mass "
        f"off by {tuple(f'{e:.1e}' for e in fd_errs)}, worst kernel-balance error "
        f"{kernel_err:.1e} over 20 points/case (all < 1e-3)",
    )


def test_criterion_08_uniform_allocations_match_more():
    start = time.perf_counter()
    failures = []
    details = []
    for k in (1, 2, 3):
        config = ExperimentConfig(
            mode="uniformity", seed=808000 + k, n=400, k=k, trials=1000,
            alpha_grid=tuple(np.linspace(0.0, 1.0, 10).tolist()),
        )
        result = run_uniformity_sweep(config)
        for family in ("fixed_base", "fixed_extra", "fixed_p"):
            sub = result.select(family=family)
            means = np.array(sub.column("mean_fraction"))
            ses = np.array(sub.column("std_err"))
            alphas = np.array(sub.column("alpha"))
            z = (means[0] - means[-1]) / math.hypot(ses[0], ses[-1])
            rho = sps.spearmanr(alphas, means).statistic
            details.append(f"k={k} {family}: z={z:.1f} rho={rho:.2f}")
            if not (z > 3.0 and rho < 0.0):
                failures.append(details[-1])
    elapsed = time.perf_counter() - start
    announce(
        8,
        not failures,
        f"endpoint drop > 3 SE and negative rank correlation for all 9 sweeps "
        f"({'; '.join(details)}), {elapsed:.0f}s",
    )


def test_criterion_09_radius_violation():
    start = time.perf_counter()
    config = ExperimentConfig(
        mode="radius_vs_volume", seed=909000, n=400, k=2, trials=1000,
        alpha_grid=tuple(np.linspace(0.0, 1.0, 10).tolist()),
    )
    result = run_radius_vs_volume(config)
    volume_ok = []
    radius_violations = []
    for family in ("fixed_base", "fixed_extra", "fixed_p"):
        vol = result.select(family=family, parametrization="volume")
        means = np.array(vol.column("mean_fraction"))
        ses = np.array(vol.column("std_err"))
        z = (means[0] - means[-1]) / math.hypot(ses[0], ses[-1])
        volume_ok.append(bool(z > 3.0))
        rad = result.select(family=family, parametrization="radius")
        means = np.array(rad.column("mean_fraction"))
        ses = np.array(rad.column("std_err"))
        best = max(
            (means[j] - means[i]) / math.hypot(ses[i], ses[j])
            for i in range(len(means))
            for j in range(i + 1, len(means))
        )
        radius_violations.append(float(best))
    elapsed = time.perf_counter() - start
    announce(
        9,
        all(volume_ok) and max(radius_violations) > 3.0,
        f"volume endpoint tests {volume_ok}; best radius increasing-pair z per family "
        f"{tuple(round(v, 1) for v in radius_violations)} (some > 3), {elapsed:.0f}s",
    )


def test_criterion_10_bounds_bracket():
    start = time.perf_counter()
    config = ExperimentConfig(mode="bounds", seed=101000, n=400, trials=1000)
    result = run_bounds_validation(config)
    cols = result.columns
    worst = 0.0
    for row in result.rows:
        mean = row[cols.index("mean_fraction")]
        lo = row[cols.index("lower_bound")]
        hi = row[cols.index("upper_bound")]
        worst = max(worst, lo - mean, mean - hi)
    elapsed = time.perf_counter() - start
    announce(
        10,
        worst <= 0.02,
        f"all 30 sweep points inside [lower - 0.02, upper + 0.02]; worst overhang "
        f"{worst:.4f}, {elapsed:.0f}s",
    )


def test_criterion_11_dplus_oracle():
    rng = _rng(11)
    failures = 0
    for _ in range(500):
        n = int(rng.integers(1, 9))
        m = int(rng.integers(1, 9))
        adjacency = [np.nonzero(rng.random(m) < 0.35)[0].tolist() for _ in range(n)]
        graph = graph_from_adjacency(adjacency, num_demand=m)
        full = brute_force_matching_number(adjacency, m)
        expected = tuple(
            j
            for j in range(m)
            if brute_force_matching_number(
                [[v for v in row if v != j] for row in adjacency], m
            )
            == full
        )
        if dplus(graph, hopcroft_karp(graph)).indices != expected:
            failures += 1
    announce(
        11,
        failures == 0,
        f"alternating-reachability avoidable set == deletion oracle on 500 graphs, "
        f"{failures} failures",
    )


def test_criterion_12_transfer_decomposition():
    rng = np.random.default_rng(12012)
    worst_err = 0.0
    worst_tau = 0.0
    all_exact = True
    steps_ok = True
    for _ in range(1000):
        n = int(rng.integers(2, 51))
        x, y = random_majorized_pair(rng, n)
        err, steps, tau_sum, per_step_exact = reconstruction_report(x, y)
        worst_err = max(worst_err, err)
        l1 = np.abs(np.sort(x)[::-1] - np.sort(y)[::-1]).sum()
        worst_tau = max(worst_tau, abs(tau_sum - l1 / 2.0))
        all_exact = all_exact and per_step_exact
        steps_ok = steps_ok and steps <= n - 1
    announce(
        12,
        worst_err <= 1e-12 and worst_tau <= 1e-12 and all_exact and steps_ok,
        f"1000 majorized pairs: reconstruction err {worst_err:.1e} (< 1e-12), "
        f"tau-sum err {worst_tau:.1e} (< 1e-12), per-step l1 drop exact: {all_exact}, "
        f"step counts within n-1: {steps_ok}",
    )


def test_criterion_13_trimming():
    eps, n, r = 0.2, 400, 0.15
    losses = []
    idempotent = True
    for t in range(200):
        rng = _rng(13, t)
        supply = rng.random((n, 2))
        demand = rng.random((n, 2))
        graph = build_graph(supply, ServiceRanges(np.full(n, r), r), demand)
        trimmed = trim(graph, eps)
        losses.append(hopcroft_karp(graph).size - hopcroft_karp(trimmed).size)
        if t < 20 and trim(trimmed, eps).adjacency != trimmed.adjacency:
            idempotent = False
    mean_loss = float(np.mean(losses))
    announce(
        13,
        0.0 <= mean_loss <= eps * n and idempotent,
        f"mean matching loss from trimming {mean_loss:.2f} <= eps*n = {eps * n:.0f}; "
        f"trim idempotent: {idempotent}",
    )


def test_criterion_14_window_measure_concavity():
    n = 100
    ells = np.linspace(0.25, 2.0, 8)
    trials = 2000
    samples = np.empty((trials, ells.size))
    for t in range(trials):
        rng = _rng(14, t)
        supply = rng.random((n, 1))
        demand = rng.random((n, 1))
        graph = build_graph(supply, ServiceRanges(np.ones(n), 1.0), demand)
        matching = hopcroft_karp(graph)
        avoidable = dplus(graph, matching)
        positions = np.sort(graph.demand[list(avoidable.indices), 0])
        for e_idx, ell in enumerate(ells):
            samples[t, e_idx] = delta_window_measure(positions, float(ell), n)
    means = samples.mean(axis=0)
    increments = np.diff(means)
    nondecreasing = bool(np.all(increments >= -1e-12))
    second = samples[:, 2:] - 2.0 * samples[:, 1:-1] + samples[:, :-2]
    second_mean = second.mean(axis=0)
    second_se = second.std(axis=0, ddof=1) / math.sqrt(trials)
    concave_ok = bool(np.all(second_mean <= 2.0 * second_se))
    announce(
        14,
        nondecreasing and concave_ok,
        f"window-measure estimate nondecreasing: {nondecreasing}; second differences "
        f"within 2 SE of nonpositive: {concave_ok} "
        f"(max {second_mean.max():.2e} vs 2SE {2 * second_se.max():.2e})",
    )
