"""Leader-side price selection.

Four routes to a price: the zero-price follower equilibrium (the reference
operating point), the closed-form asymptote-intersection price, a
semi-exhaustive grid search over uniform prices with 1-D refinement, and
the heuristic price update driven by reported mixed strategies (the outer
loop of the discrete game).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .continuous import BrSchedule, EquilibriumReport, run_algorithm1
from .discrete import (
    LearningReport,
    PowerLawSchedule,
    expected_follower_payoff,
    expected_powers,
    initial_state,
    run_learning,
)
from .network import NetworkInstance, sinr_macro
from .payoff import interference_denominator, leader_revenue

__all__ = [
    "PriceSearchConfig",
    "PriceSearchResult",
    "ZeroPriceResult",
    "LearnerConfig",
    "Algorithm2Result",
    "zero_price_equilibrium",
    "asymptote_price",
    "cutoff_price",
    "se_price_search",
    "algorithm2_price_step",
    "run_algorithm2",
]


@dataclass(frozen=True)
class PriceSearchConfig:
    """Knobs for se_price_search.

    mode 'uniform-price' sweeps one price charged to every link; the grid
    values are absolute prices. mode 'per-link' sweeps a scalar multiplier
    applied to the per-link asymptote prices lambda^a. When grid bounds are
    omitted they default to [1e-3 * min_k lambda^a_k, 1e3 * max_k lambda^a_k]
    (uniform) or [1e-3, 1e3] (per-link multiplier).
    """

    mode: str = "uniform-price"
    grid_min: float | None = None
    grid_max: float | None = None
    grid_count: int = 60
    bisection_refinement_tol: float = 1e-3
    mc_trials: int = 1

    def __post_init__(self) -> None:
        if self.mode not in ("uniform-price", "per-link"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.grid_count < 2:
            raise ValueError("grid_count must be >= 2")
        if self.grid_min is not None and self.grid_min <= 0.0:
            raise ValueError("grid_min must be positive for log spacing")
        if self.grid_max is not None and self.grid_min is not None:
            if self.grid_max <= self.grid_min:
                raise ValueError("grid_max must exceed grid_min")
        if self.bisection_refinement_tol <= 0.0:
            raise ValueError("refinement tol must be positive")
        if self.mc_trials < 1:
            raise ValueError("mc_trials must be >= 1")


@dataclass
class ZeroPriceResult:
    """Follower equilibrium at lambda = 0 plus its SINR levels."""

    profile: np.ndarray
    sinr: np.ndarray
    converged: bool
    report: EquilibriumReport


@dataclass
class PriceSearchResult:
    """Outcome of se_price_search."""

    prices: np.ndarray
    revenue: float
    equilibrium: np.ndarray  # follower profile at the returned prices
    boundary_max: bool  # grid argmax sat on an endpoint (grid too narrow)
    grid_values: np.ndarray  # swept uniform prices or per-link multipliers
    grid_revenues: np.ndarray
    multiplier: float | None  # per-link mode: the returned multiplier
    all_converged: bool


def zero_price_equilibrium(net: NetworkInstance, tol: float = 1e-7) -> ZeroPriceResult:
    """Algorithm 1 at lambda = 0: the unpriced power allocation p* and gamma*."""
    K = net.num_followers
    prices = np.zeros(K)
    report = run_algorithm1(net, prices, init=np.zeros(K), tol=tol)
    p = report.final_profile
    gamma = np.array(
        [net.gain[k, k] * p[k - 1] / interference_denominator(net, k, p) for k in range(1, K + 1)]
    )
    return ZeroPriceResult(profile=p, sinr=gamma, converged=report.converged, report=report)


def asymptote_price(net: NetworkInstance, p_star: np.ndarray) -> np.ndarray:
    """Intersection of the low- and high-price payment asymptotes, per link.

    lambda^a_k = W / ((p*_k + p_a) * (N_k + h_0k*p_0)), with p* the
    zero-price equilibrium profile.
    """
    p_star = np.asarray(p_star, dtype=float)
    K = net.num_followers
    base = np.array([net.noise[k] + net.gain[0, k] * net.mu_power for k in range(1, K + 1)])
    return net.bandwidth / ((p_star + net.circuit_power) * base)


def cutoff_price(net: NetworkInstance, k: int, opponents: np.ndarray) -> float:
    """Price above which follower k's best response is exactly 0.

    The payoff gradient at p_k = 0 is W*G_k/p_a - lambda_k*h_k0; it turns
    negative at lambda_k = W*G_k/(p_a*h_k0). Useful for sizing sweep grids
    so the revenue roll-off is actually inside them.
    """
    G = net.gain[k, k] / interference_denominator(net, k, opponents)
    return net.bandwidth * G / (net.circuit_power * net.gain[k, 0])


def _fixed_point_revenue(
    net: NetworkInstance,
    prices: np.ndarray,
    init: np.ndarray,
    tol: float,
) -> tuple[float, np.ndarray, bool]:
    report = run_algorithm1(net, prices, init=init, tol=tol)
    p = report.final_profile
    return leader_revenue(net, p, prices), p, report.converged


def se_price_search(
    net: NetworkInstance,
    cfg: PriceSearchConfig = PriceSearchConfig(),
    inner_tol: float = 1e-7,
) -> PriceSearchResult:
    """Semi-exhaustive search for the revenue-maximizing price.

    Sweeps a log-spaced grid (warm-starting each follower equilibrium from
    the previous grid point), then refines around the best interior cell
    with a bounded 1-D minimization in log-price space. If the grid argmax
    lies on an endpoint the result is flagged ``boundary_max`` and no
    refinement is attempted.
    """
    zp = zero_price_equilibrium(net, tol=inner_tol)
    lam_a = asymptote_price(net, zp.profile)

    if cfg.mode == "uniform-price":
        lo = cfg.grid_min if cfg.grid_min is not None else 1e-3 * float(lam_a.min())
        hi = cfg.grid_max if cfg.grid_max is not None else 1e3 * float(lam_a.max())
        direction = np.ones(net.num_followers)
    else:
        lo = cfg.grid_min if cfg.grid_min is not None else 1e-3
        hi = cfg.grid_max if cfg.grid_max is not None else 1e3
        direction = lam_a
    if hi <= lo:
        raise ValueError("degenerate price grid")
    grid = np.geomspace(lo, hi, cfg.grid_count)

    revenues = np.empty(cfg.grid_count)
    profiles = []
    all_converged = zp.converged
    init = zp.profile
    for i, x in enumerate(grid):
        revenue, p_eq, ok = _fixed_point_revenue(net, x * direction, init, inner_tol)
        revenues[i] = revenue
        profiles.append(p_eq)
        all_converged = all_converged and ok
        init = p_eq

    best = int(np.argmax(revenues))
    boundary = best in (0, cfg.grid_count - 1)
    best_x = float(grid[best])
    best_revenue = float(revenues[best])
    best_profile = profiles[best]

    if not boundary:
        warm = best_profile

        def neg_revenue(log_x: float) -> float:
            nonlocal warm
            revenue, p_eq, _ = _fixed_point_revenue(net, math.exp(log_x) * direction, warm, inner_tol)
            warm = p_eq
            return -revenue

        res = minimize_scalar(
            neg_revenue,
            bounds=(math.log(grid[best - 1]), math.log(grid[best + 1])),
            method="bounded",
            options={"xatol": math.log1p(cfg.bisection_refinement_tol)},
        )
        refined_x = float(math.exp(res.x))
        refined_revenue, refined_profile, ok = _fixed_point_revenue(
            net, refined_x * direction, best_profile, inner_tol
        )
        all_converged = all_converged and ok
        if refined_revenue > best_revenue:
            best_x, best_revenue, best_profile = refined_x, refined_revenue, refined_profile

    return PriceSearchResult(
        prices=best_x * direction,
        revenue=best_revenue,
        equilibrium=best_profile,
        boundary_max=boundary,
        grid_values=grid,
        grid_revenues=revenues,
        multiplier=best_x if cfg.mode == "per-link" else None,
        all_converged=all_converged,
    )


def algorithm2_price_step(
    net: NetworkInstance,
    action_sets,
    strategies,
) -> tuple[np.ndarray, np.ndarray]:
    """Heuristic price from reported strategies.

    lambda_k = E[psi_k] / (h_k0 * E[p_k]), where the numerator is the
    expected efficiency over the joint strategy profile and the denominator
    the expected payment base. By construction the expected net payoff of
    every follower is 0 at the new price. Followers whose strategy puts all
    mass on p = 0 get lambda_k = 0 and a raised flag.

    Returns (prices, flagged) with ``flagged`` a boolean vector.
    """
    K = net.num_followers
    zero = np.zeros(K)
    mean_p = expected_powers(action_sets, strategies)
    prices = np.zeros(K)
    flagged = np.zeros(K, dtype=bool)
    for k in range(1, K + 1):
        base = net.gain[k, 0] * mean_p[k - 1]
        if base <= 0.0:
            flagged[k - 1] = True
            continue
        mean_psi = expected_follower_payoff(net, k, action_sets, strategies, zero)
        prices[k - 1] = mean_psi / base
    return prices, flagged


@dataclass(frozen=True)
class LearnerConfig:
    """Configuration of one discrete learning run inside Algorithm 2."""

    tau: float = 1.0
    alpha1: PowerLawSchedule = PowerLawSchedule()
    alpha2: PowerLawSchedule = PowerLawSchedule(c=2.0)
    rng_seed: int = 0
    tol: float = 1e-3
    window: int = 50
    max_iters: int = 10_000


@dataclass
class Algorithm2Result:
    """Outcome of the heuristic price-updating outer loop."""

    prices: np.ndarray
    strategies: np.ndarray
    trace: list  # (outer, prices, expected powers, expected MU SINR, revenue)
    outer_iterations: int
    converged: bool
    flagged: np.ndarray
    last_report: LearningReport


def run_algorithm2(
    net: NetworkInstance,
    action_sets,
    learner: LearnerConfig = LearnerConfig(),
    sinr_threshold: float | None = None,
    max_outer: int = 20,
    time_average: bool = False,
) -> Algorithm2Result:
    """Heuristic price updating until the macro link's SINR target is met.

    Starts at lambda = 0, runs the followers' learning to convergence,
    computes the expected macro SINR from the reported strategies' expected
    powers, and while the target is unmet applies ``algorithm2_price_step``
    and re-learns. Hitting ``max_outer`` returns a flagged partial result.
    With ``time_average`` the strategies reported to the price step are the
    running mean of the learning run's pi trace instead of its final point.
    """
    threshold = net.mu_sinr_threshold if sinr_threshold is None else sinr_threshold
    K = net.num_followers
    prices = np.zeros(K)
    flagged = np.zeros(K, dtype=bool)
    trace = []
    converged = False
    outer = 0
    report = None
    strategies = None
    while True:
        state = initial_state(
            action_sets,
            tau=learner.tau,
            alpha1=learner.alpha1,
            alpha2=learner.alpha2,
            rng_seed=learner.rng_seed + outer,
        )
        report = run_learning(
            net,
            prices,
            state,
            tol=learner.tol,
            window=learner.window,
            max_iters=learner.max_iters,
            record_pi=time_average,
        )
        strategies = report.pi_trace.mean(axis=0) if time_average else report.strategies
        mean_p = expected_powers(action_sets, strategies)
        mu_sinr = sinr_macro(net, mean_p)
        revenue = float(np.sum(prices * net.gain[1:, 0] * mean_p))
        trace.append((outer, prices.copy(), mean_p, mu_sinr, revenue))
        if mu_sinr >= threshold:
            converged = True
            break
        if outer >= max_outer:
            break
        prices, flagged = algorithm2_price_step(net, action_sets, strategies)
        outer += 1
    return Algorithm2Result(
        prices=prices,
        strategies=strategies,
        trace=trace,
        outer_iterations=outer,
        converged=converged,
        flagged=flagged,
        last_report=report,
    )
