"""Command-line front end.

Experiment subcommands write CSV files; single-shot analytics write JSON
(either to ``--out`` or, when no path is given, to standard output).  Exit
status is 0 on success, 2 on argument or configuration errors, and 1 on
runtime failures.  All randomness flows from the mandatory ``--seed``; no
subcommand reads the clock or process entropy.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import experiments as xp
from .dualrange import (
    DualRangeParams,
    lower_bound_q,
    lower_bound_q_limit,
    lower_bound_sup,
    matched_fractions,
    simulate_frequencies,
    upper_bound,
)
from .geometry import Parametrization, ServiceRanges, build_graph
from .majorization import t_transform_decompose
from .matching import dplus, greedy_interval, hopcroft_karp

__all__ = ["main"]

_SWEEP_SCHEMA = (
    "CSV columns: family,k,alpha,base,extra,p,mean_fraction,std_dev,std_err,trials"
)
_RVV_SCHEMA = (
    "CSV columns: family,parametrization,k,alpha,base,extra,p,mean_fraction,"
    "std_dev,std_err,trials,points_checksum"
)
_MARKOV_SCHEMA = (
    "with --sweep: CSV columns sweep,value,base,extra,p,mean_fraction,std_dev,"
    "std_err,trials,formula_fraction,closed_form; otherwise JSON with region "
    "frequencies f_a..f_e and matched fractions"
)
_BOUNDS_SCHEMA = (
    "with --sweep: CSV columns panel,value,base,extra,p,mean_fraction,std_dev,"
    "std_err,trials,lower_bound,upper_bound; otherwise JSON with upper, "
    "lower_sup and lower_at_p"
)
_COUNTER_SCHEMA = (
    "CSV columns: arm,n,trials,mean_fraction,std_dev,std_err,budget_total"
)


class _ConfigError(Exception):
    """Invalid arguments or configuration; maps to exit status 2."""


def _emit_json(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(f"wrote {out}")
    else:
        print(text)


def _load_config(args, mode: str) -> xp.ExperimentConfig:
    data: dict = {}
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except FileNotFoundError:
            raise _ConfigError(f"config file not found: {args.config}")
        except json.JSONDecodeError as exc:
            raise _ConfigError(f"config file {args.config} is not valid JSON: {exc}")
    data["mode"] = mode
    # Flags override config-file fields, flags last.
    overrides = {
        "seed": args.seed,
        "n": args.n,
        "m": args.m,
        "k": args.k,
        "trials": args.trials,
        "workers": args.threads,
    }
    for key, value in overrides.items():
        if value is not None:
            if key in data and data[key] != value:
                print(f"note: flag --{key}={value} overrides config value {data[key]}")
            data[key] = value
    if getattr(args, "alpha_points", None):
        data["alpha_grid"] = np.linspace(0.0, 1.0, args.alpha_points).tolist()
    if "workers" not in data:
        data["workers"] = os.cpu_count() or 1
    if "seed" not in data or data["seed"] is None:
        raise _ConfigError("field 'seed': a master seed is required")
    try:
        return xp.config_from_dict(data)
    except (ValueError, TypeError, KeyError) as exc:
        raise _ConfigError(f"invalid configuration: {exc}")


def _add_common(parser: argparse.ArgumentParser, *, alpha: bool = True) -> None:
    parser.add_argument("--config", help="JSON config file (flags override its fields)")
    parser.add_argument("--out", help="output CSV path")
    parser.add_argument("--seed", type=int, help="master seed (required)")
    parser.add_argument("--n", type=int, help="supply count")
    parser.add_argument("--m", type=int, help="demand count (default n)")
    parser.add_argument("--k", type=int, help="dimension")
    parser.add_argument("--trials", type=int, help="Monte Carlo trials per grid point")
    parser.add_argument(
        "--threads", type=int, help="worker pool size (default: logical cores)"
    )
    if alpha:
        parser.add_argument("--alpha-points", type=int, help="evenly spaced alpha grid size")


def _run_table(args, mode: str) -> int:
    config = _load_config(args, mode)
    if not args.out:
        raise _ConfigError("field 'out': experiment subcommands require --out")
    result = xp.run_experiment(config)
    xp.write_csv(result, args.out)
    print(f"wrote {args.out} ({len(result.rows)} rows)")
    return 0


def _cmd_sweep(args) -> int:
    return _run_table(args, "uniformity")


def _cmd_rvv(args) -> int:
    config = _load_config(args, "radius_vs_volume")
    if config.k != 2:
        raise _ConfigError("field 'k': radius-vs-volume requires k=2")
    if not args.out:
        raise _ConfigError("field 'out': experiment subcommands require --out")
    result = xp.run_radius_vs_volume(config)
    xp.write_csv(result, args.out)
    print(f"wrote {args.out} ({len(result.rows)} rows)")
    return 0


def _cmd_markov(args) -> int:
    if args.sweep:
        return _run_table(args, "markov")
    if args.seed is None:
        raise _ConfigError("field 'seed': markov simulation requires --seed")
    params = DualRangeParams(args.base, args.extra, args.p)
    rng = np.random.default_rng(args.seed)
    freqs = simulate_frequencies(params, args.steps, args.burn_in, rng)
    fractions = matched_fractions(freqs, args.p)
    _emit_json(
        {
            "base": args.base,
            "extra": args.extra,
            "p": args.p,
            "steps": args.steps,
            "f_a": freqs.f_a,
            "f_b": freqs.f_b,
            "f_c": freqs.f_c,
            "f_d": freqs.f_d,
            "f_e": freqs.f_e,
            "matched_total": fractions.total,
            "matched_flex": fractions.flex,
            "matched_nonflex": fractions.nonflex,
        },
        args.out,
    )
    return 0


def _cmd_bounds(args) -> int:
    if args.sweep:
        return _run_table(args, "bounds")
    payload = {
        "base": args.base,
        "extra": args.extra,
        "p": args.p,
        "upper": upper_bound(args.base, args.extra, args.p),
        "lower_sup": lower_bound_sup(args.base, args.extra, args.p),
        "lower_at_p": lower_bound_q_limit(args.base, args.extra, args.p),
    }
    if args.q is not None:
        payload["lower_at_q"] = lower_bound_q(args.base, args.extra, args.p, args.q)
    _emit_json(payload, args.out)
    return 0


def _cmd_counterexample(args) -> int:
    return _run_table(args, "counterexample")


def _instance(args):
    rng = np.random.default_rng(args.seed)
    n, m, k = args.n, args.m if args.m is not None else args.n, args.k
    supply = rng.random((n, k))
    demand = rng.random((m, k))
    flexible = rng.random(n) < args.p
    values = args.base + args.extra * flexible
    cap = args.base + args.extra if args.base + args.extra > 0 else 1.0
    parametrization = Parametrization(args.parametrization)
    return build_graph(supply, ServiceRanges(values, cap), demand, parametrization)


def _cmd_match(args) -> int:
    if args.seed is None:
        raise _ConfigError("field 'seed': match requires --seed")
    graph = _instance(args)
    matching = hopcroft_karp(graph)
    payload = {
        "n": graph.num_supply,
        "m": graph.num_demand,
        "k": graph.dimension,
        "matching_size": matching.size,
        "matching_fraction": matching.size / graph.num_supply,
        "edges": graph.num_edges,
    }
    if graph.dimension == 1:
        payload["greedy_size"] = greedy_interval(graph).size
    _emit_json(payload, args.out)
    return 0


def _cmd_dplus(args) -> int:
    if args.seed is None:
        raise _ConfigError("field 'seed': dplus requires --seed")
    graph = _instance(args)
    matching = hopcroft_karp(graph)
    avoidable = dplus(graph, matching)
    _emit_json(
        {
            "n": graph.num_supply,
            "m": graph.num_demand,
            "matching_size": matching.size,
            "dplus": list(avoidable.indices),
        },
        args.out,
    )
    return 0


def _parse_vector(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise _ConfigError(f"field 'vector': cannot parse {text!r} as comma-separated floats")


def _cmd_decompose(args) -> int:
    x = _parse_vector(args.x)
    y = _parse_vector(args.y)
    try:
        decomposition = t_transform_decompose(x, y)
    except ValueError as exc:
        raise _ConfigError(f"invalid vectors: {exc}")
    _emit_json(
        {
            "steps": [
                {"i": s.i, "j": s.j, "tau": s.tau} for s in decomposition.steps
            ],
            "sort_permutation": decomposition.sort_permutation.tolist(),
            "num_steps": len(decomposition.steps),
        },
        args.out,
    )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spatialmatch",
        description="Spatial matching simulations and dual-range analytics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="uniformity sweep over alpha", epilog=_SWEEP_SCHEMA)
    _add_common(p)
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser(
        "radius-vs-volume", help="paired parametrization sweeps at k=2", epilog=_RVV_SCHEMA
    )
    _add_common(p)
    p.set_defaults(fn=_cmd_rvv)

    p = sub.add_parser(
        "markov", help="lead-time chain simulation or sweep validation", epilog=_MARKOV_SCHEMA
    )
    _add_common(p, alpha=False)
    p.add_argument("--sweep", action="store_true", help="run the full validation sweep (CSV)")
    p.add_argument("--base", type=float, default=1.0)
    p.add_argument("--extra", type=float, default=1.0)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--steps", type=int, default=10**6)
    p.add_argument("--burn-in", type=int, default=None)
    p.set_defaults(fn=_cmd_markov)

    p = sub.add_parser(
        "bounds", help="analytic bounds for one parameter triple, or a sweep", epilog=_BOUNDS_SCHEMA
    )
    _add_common(p, alpha=False)
    p.add_argument("--sweep", action="store_true", help="run the bracket sweep (CSV)")
    p.add_argument("--base", type=float, default=1.0)
    p.add_argument("--extra", type=float, default=1.0)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--q", type=float, default=None, help="also report the split bound at q")
    p.set_defaults(fn=_cmd_bounds)

    p = sub.add_parser(
        "counterexample", help="clustered-support uniform vs concentrated", epilog=_COUNTER_SCHEMA
    )
    _add_common(p, alpha=False)
    p.set_defaults(fn=_cmd_counterexample)

    for name, fn, help_text in (
        ("match", _cmd_match, "matching size of one seeded dual-range instance (JSON)"),
        ("dplus", _cmd_dplus, "avoidable demand set of one seeded instance (JSON)"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--out", help="output JSON path (default: stdout)")
        p.add_argument("--seed", type=int)
        p.add_argument("--n", type=int, default=100)
        p.add_argument("--m", type=int, default=None)
        p.add_argument("--k", type=int, default=1)
        p.add_argument("--base", type=float, default=1.0)
        p.add_argument("--extra", type=float, default=0.0)
        p.add_argument("--p", type=float, default=0.0)
        p.add_argument(
            "--parametrization", choices=["volume", "radius"], default="volume"
        )
        p.set_defaults(fn=fn)

    p = sub.add_parser("decompose", help="transfer decomposition of a majorized pair (JSON)")
    p.add_argument("--x", required=True, help="comma-separated majorizing vector")
    p.add_argument("--y", required=True, help="comma-separated majorized vector")
    p.add_argument("--out", help="output JSON path (default: stdout)")
    p.set_defaults(fn=_cmd_decompose)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except _ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failures
        print(f"runtime error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
