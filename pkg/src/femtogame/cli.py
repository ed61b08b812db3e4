"""Command line front end.

Subcommands:

generate    draw a random topology and write it as a scenario network block
sweep       uniform-price sweep of the continuous or discrete game -> CSV
            (alias: price-sweep)
search      grid-plus-refinement search for the revenue-optimal price
            (alias: price-search)
asymptote   closed-form high-price approximation per link
learn       run the stochastic learning dynamics, optionally with the
            heuristic outer price loop (--algorithm2), trace -> CSV
experiment  run a named study from the experiments module

Exit codes: 0 success, 2 invalid input or configuration, 3 a required
computation failed to converge.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from ._csv import write_rows
from .discrete import default_action_sets, initial_state, run_learning, write_learning_csv
from .experiments import (
    EXPERIMENT_IDS,
    ExperimentSpec,
    continuous_sweep_rows,
    discrete_sweep_rows,
    run_experiment,
    sweep_grid,
)
from .pricing import (
    LearnerConfig,
    PriceSearchConfig,
    asymptote_price,
    run_algorithm2,
    se_price_search,
    zero_price_equilibrium,
)
from .scenario import Scenario, ScenarioError, load_scenario, network_from_scenario, save_network

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_NO_CONVERGENCE = 3


def _load(args) -> Scenario:
    if args.config:
        return load_scenario(args.config)
    return load_scenario(None)


def _network(args, scenario: Scenario):
    seed = args.seed if getattr(args, "seed", None) is not None else None
    followers = getattr(args, "followers", None)
    return network_from_scenario(scenario, seed=seed, num_followers=followers)


def cmd_generate(args) -> int:
    scenario = _load(args)
    net = _network(args, scenario)
    save_network(net, args.out)
    print(f"wrote network with {net.num_followers} followers to {args.out}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    scenario = _load(args)
    net = _network(args, scenario)
    grid = sweep_grid(net, args.points)
    if args.game == "continuous":
        rows = continuous_sweep_rows(net, grid)
    else:
        rows = discrete_sweep_rows(net, grid, scenario.num_actions)
    header = ("lambda_per_watt", "revenue", "mean_efficiency_per_joule", "mu_sinr_linear", "converged")
    write_rows(args.out, header, rows)
    if not all(r[4] for r in rows):
        print(f"wrote {len(rows)} rows to {args.out}; some price points did not converge", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


def cmd_search(args) -> int:
    scenario = _load(args)
    net = _network(args, scenario)
    cfg = PriceSearchConfig(mode=args.mode, grid_count=args.points)
    result = se_price_search(net, cfg)
    if not result.all_converged:
        print("price search: follower dynamics failed to converge at some grid point", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    payload = {
        "mode": args.mode,
        "prices_per_watt": [float(x) for x in result.prices],
        "revenue": result.revenue,
        "boundary_max": result.boundary_max,
        "equilibrium_powers_w": [float(x) for x in result.equilibrium],
    }
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        print(f"wrote search result to {args.out}")
    else:
        print(json.dumps(payload, indent=2))
    if result.boundary_max:
        print("note: best grid price sits on the grid boundary; widen the grid to verify", file=sys.stderr)
    return EXIT_OK


def cmd_asymptote(args) -> int:
    scenario = _load(args)
    net = _network(args, scenario)
    zp = zero_price_equilibrium(net)
    if not zp.converged:
        print("zero-price equilibrium did not converge", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    lam = asymptote_price(net, zp.profile)
    payload = {
        "asymptote_prices_per_watt": [float(x) for x in lam],
        "zero_price_powers_w": [float(x) for x in zp.profile],
    }
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        print(f"wrote asymptote prices to {args.out}")
    else:
        print(json.dumps(payload, indent=2))
    return EXIT_OK


def cmd_learn(args) -> int:
    scenario = _load(args)
    net = _network(args, scenario)
    actions = default_action_sets(net, scenario.num_actions)
    learner = scenario.learner
    if args.seed is not None:
        learner = replace(learner, rng_seed=args.seed)
    if args.algorithm2:
        result = run_algorithm2(net, actions, learner=learner)
        print(
            f"outer iterations: {result.outer_iterations}, converged: {result.converged}, "
            f"prices: {[float(x) for x in result.prices]}"
        )
        if args.out:
            header = ("outer", *(f"lambda_{k}" for k in range(1, net.num_followers + 1)),
                      "mean_expected_power_w", "mu_sinr_linear", "expected_revenue")
            rows = [
                (outer, *(float(x) for x in prices), float(np.mean(powers)), mu, revenue)
                for outer, prices, powers, mu, revenue in result.trace
            ]
            write_rows(args.out, header, rows)
            print(f"wrote outer-loop trace to {args.out}")
        return EXIT_OK if result.converged else EXIT_NO_CONVERGENCE
    prices = np.full(net.num_followers, args.price)
    state = initial_state(
        actions,
        tau=learner.tau,
        alpha1=learner.alpha1,
        alpha2=learner.alpha2,
        rng_seed=learner.rng_seed,
    )
    report = run_learning(
        net, prices, state, tol=learner.tol, window=learner.window, max_iters=learner.max_iters
    )
    print(f"iterations: {report.iterations}, converged: {report.converged}")
    if args.out:
        write_learning_csv(report, args.out)
        print(f"wrote learning trace to {args.out}")
    return EXIT_OK if report.converged else EXIT_NO_CONVERGENCE


def cmd_experiment(args) -> int:
    scenario = _load(args) if args.config else None
    spec = ExperimentSpec(
        experiment_id=args.id,
        trials=args.trials,
        seed_base=args.seed or 0,
        output_path=args.out,
        learner=scenario.learner if scenario else LearnerConfig(),
        num_actions=scenario.num_actions if scenario else 6,
        num_followers=args.followers or 6,
        grid_count=args.points,
    )
    summary = run_experiment(spec)
    print(json.dumps(summary, indent=2, default=str))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="femtogame", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out_default=None, out_required=False):
        p.add_argument("--config", help="scenario JSON path")
        p.add_argument("--seed", type=int, default=None, help="topology RNG seed override")
        p.add_argument("--followers", type=int, default=None, help="number of follower links")
        if out_required:
            p.add_argument("--out", required=True, help="output file path")
        else:
            p.add_argument("--out", default=out_default, help="output file path")

    p = sub.add_parser("generate", help="draw a topology and save it")
    common(p, out_required=True)

    p = sub.add_parser("sweep", aliases=["price-sweep"], help="uniform-price sweep -> CSV")
    common(p, out_required=True)
    p.add_argument("--points", type=int, default=40, help="price grid size")
    p.add_argument("--game", choices=("continuous", "discrete"), default="continuous")

    p = sub.add_parser("search", aliases=["price-search"], help="revenue-optimal price search")
    common(p)
    p.add_argument("--points", type=int, default=60, help="price grid size")
    p.add_argument("--mode", choices=("uniform-price", "per-link"), default="uniform-price")

    p = sub.add_parser("asymptote", help="closed-form high-price approximation")
    common(p)

    p = sub.add_parser("learn", help="stochastic learning run -> CSV")
    common(p)
    p.add_argument("--price", type=float, default=0.0, help="uniform interference price")
    p.add_argument("--algorithm2", action="store_true", help="run the heuristic outer price loop")

    p = sub.add_parser("experiment", help="run a named study")
    common(p, out_required=True)
    p.add_argument("--id", required=True, choices=EXPERIMENT_IDS)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--points", type=int, default=40, help="price grid size for sweeps")

    return parser


_COMMANDS = {
    "generate": cmd_generate,
    "sweep": cmd_sweep,
    "price-sweep": cmd_sweep,
    "search": cmd_search,
    "price-search": cmd_search,
    "asymptote": cmd_asymptote,
    "learn": cmd_learn,
    "experiment": cmd_experiment,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ScenarioError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
