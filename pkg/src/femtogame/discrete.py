"""Discrete-strategy follower game and two-timescale stochastic learning.

Followers draw powers from a finite action set, keep a mixed strategy pi_k
on it, and learn from realized payoffs only: a fast timescale updates the
per-action payoff estimates U_k (only the sampled action moves), a slow
timescale nudges pi_k toward the Logit response of the current estimates.
Expected payoffs/revenue under product-form strategies are computed by
explicit enumeration over joint action profiles, so they are reserved for
small K * M^K.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._csv import write_rows
from .network import NetworkInstance
from .payoff import follower_payoff

__all__ = [
    "ActionSet",
    "PowerLawSchedule",
    "ScheduleReport",
    "LearningState",
    "LearningReport",
    "validate_schedules",
    "validate_simplex",
    "default_action_sets",
    "logit_response",
    "expected_powers",
    "expected_follower_payoff",
    "expected_leader_revenue",
    "discrete_best_response",
    "discrete_equilibrium",
    "initial_state",
    "learning_step",
    "run_learning",
    "write_learning_csv",
]

ENUMERATION_CAP = 10_000_000  # reject expected-value sums with K * M^K above this


@dataclass(frozen=True)
class ActionSet:
    """Ordered finite power menu for one follower; first entry is exactly 0."""

    powers: np.ndarray

    def __post_init__(self) -> None:
        powers = np.asarray(self.powers, dtype=float)
        if powers.ndim != 1 or powers.size < 2:
            raise ValueError("action set needs at least two powers")
        if powers[0] != 0.0:
            raise ValueError("first action must be exactly 0")
        if np.any(np.diff(powers) <= 0.0):
            raise ValueError("powers must be strictly increasing")
        powers.setflags(write=False)
        object.__setattr__(self, "powers", powers)

    @classmethod
    def from_table(cls, M: int, p_max: float, p_min: float = 0.0) -> "ActionSet":
        """M powers p^j = (1 - j/M)*p_min + (j/M)*p_max for j = 0..M-1."""
        if M < 2:
            raise ValueError("M must be >= 2")
        j = np.arange(M)
        return cls((1.0 - j / M) * p_min + (j / M) * p_max)

    def __len__(self) -> int:
        return int(self.powers.size)


def default_action_sets(net: NetworkInstance, M: int = 6) -> list[ActionSet]:
    """One Table-style action set per follower, scaled to its own p_max."""
    return [ActionSet.from_table(M, float(pm)) for pm in net.power_max]


@dataclass(frozen=True)
class PowerLawSchedule:
    """Step-size schedule a / (t + b)^c, evaluated at t = 1, 2, ...

    The Table defaults are ``PowerLawSchedule()`` (1/t) for the payoff
    estimates and ``PowerLawSchedule(c=2.0)`` (1/t^2) for the strategies.
    """

    a: float = 1.0
    b: float = 0.0
    c: float = 1.0

    def __post_init__(self) -> None:
        if self.a <= 0.0 or self.b < 0.0 or self.c <= 0.0:
            raise ValueError("need a > 0, b >= 0, c > 0")

    def __call__(self, t: int) -> float:
        return self.a / (t + self.b) ** self.c


@dataclass(frozen=True)
class ScheduleReport:
    """Structural check of the two-timescale step-size conditions.

    For a/(t+b)^c power laws: the step sums diverge iff c <= 1, the squared
    sums converge iff c > 1/2, and alpha2/alpha1 -> 0 iff c2 > c1.
    """

    alpha1_sum_diverges: bool
    alpha1_square_summable: bool
    alpha2_sum_diverges: bool
    alpha2_square_summable: bool
    ratio_vanishes: bool

    @property
    def satisfied(self) -> bool:
        return (
            self.alpha1_sum_diverges
            and self.alpha1_square_summable
            and self.alpha2_sum_diverges
            and self.alpha2_square_summable
            and self.ratio_vanishes
        )


def validate_schedules(alpha1: PowerLawSchedule, alpha2: PowerLawSchedule) -> ScheduleReport:
    """Check the step-size pair against the two-timescale conditions.

    Note the Table defaults (1/t, 1/t^2) FAIL the divergence condition for
    alpha2 (sum 1/t^2 is finite); with them the strategies freeze after an
    initial transient. The report records this instead of rejecting, since
    the defaults reproduce the published simulations.
    """
    return ScheduleReport(
        alpha1_sum_diverges=alpha1.c <= 1.0,
        alpha1_square_summable=alpha1.c > 0.5,
        alpha2_sum_diverges=alpha2.c <= 1.0,
        alpha2_square_summable=alpha2.c > 0.5,
        ratio_vanishes=alpha2.c > alpha1.c,
    )


def validate_simplex(pi: np.ndarray, atol: float = 1e-12) -> None:
    """Raise unless pi is componentwise in [0,1] and sums to 1 within atol."""
    pi = np.asarray(pi, dtype=float)
    if np.any(pi < 0.0) or np.any(pi > 1.0):
        raise ValueError("probabilities out of [0, 1]")
    if abs(float(pi.sum()) - 1.0) > atol:
        raise ValueError(f"probabilities sum to {pi.sum()!r}, not 1")


def logit_response(values: np.ndarray, tau: float) -> np.ndarray:
    """Boltzmann distribution over actions: softmax(values / tau).

    Max-subtraction keeps the exponentials finite for any finite values.
    """
    if tau <= 0.0:
        raise ValueError("tau must be positive")
    values = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(values)):
        raise ValueError("values must be finite")
    shifted = (values - values.max()) / tau
    e = np.exp(shifted)
    return e / e.sum()


def expected_powers(action_sets, strategies) -> np.ndarray:
    """Per-follower mean transmit power sum_j pi^j * p^j."""
    return np.array(
        [float(np.dot(strategies[i], action_sets[i].powers)) for i in range(len(action_sets))]
    )


def _check_enumeration_size(action_sets) -> int:
    total = 1
    for a in action_sets:
        total *= len(a)
    K = len(action_sets)
    if K * total > ENUMERATION_CAP:
        raise ValueError(
            f"joint enumeration size K*M^K = {K * total} exceeds cap {ENUMERATION_CAP}"
        )
    return total


def expected_follower_payoff(
    net: NetworkInstance,
    k: int,
    action_sets,
    strategies,
    prices,
) -> float:
    """Expected net payoff of follower k under product-form mixed strategies.

    Sums (psi_k(p) - lambda_k*h_k0*p_k) * prod_i pi_i(p_i) over every joint
    action profile p. Vectorized over the full M^K product grid; rejects
    problem sizes with K * M^K above ``ENUMERATION_CAP``.
    """
    _check_enumeration_size(action_sets)
    K = net.num_followers
    for pi in strategies:
        validate_simplex(pi)
    idx = np.meshgrid(*[np.arange(len(a)) for a in action_sets], indexing="ij")
    P = [action_sets[i].powers[idx[i]] for i in range(K)]
    prob = strategies[0][idx[0]].astype(float).copy()
    for i in range(1, K):
        prob *= strategies[i][idx[i]]

    denom = net.noise[k] + net.gain[0, k] * net.mu_power
    for j in range(1, K + 1):
        if j != k:
            denom = denom + net.gain[j, k] * P[j - 1]
    pk = P[k - 1]
    gamma = net.gain[k, k] * pk / denom
    psi = net.bandwidth * np.log1p(gamma) / (pk + net.circuit_power)
    u = psi - prices[k - 1] * net.gain[k, 0] * pk
    return float(np.sum(prob * u))


def expected_leader_revenue(net: NetworkInstance, action_sets, strategies, prices) -> float:
    """Expected MBS revenue: sum_k lambda_k * h_k0 * sum_j pi^j_k * p^j_k."""
    mean_p = expected_powers(action_sets, strategies)
    lam = np.asarray(prices, dtype=float)
    return float(np.sum(lam * net.gain[1:, 0] * mean_p))


def discrete_best_response(
    net: NetworkInstance, k: int, opponents: np.ndarray, prices, action_set: ActionSet
) -> int:
    """Index of follower k's payoff-maximizing action against pure opponents.

    Ties break toward the smaller power, so a follower indifferent between
    transmitting and staying silent stays silent.
    """
    trial = np.array(opponents, dtype=float)
    best_j, best_u = 0, 0.0
    for j, p in enumerate(action_set.powers):
        trial[k - 1] = p
        u = follower_payoff(net, k, trial, prices)
        if u > best_u:
            best_j, best_u = j, u
    return best_j


def discrete_equilibrium(
    net: NetworkInstance, action_sets, prices, max_rounds: int = 200
) -> tuple[np.ndarray, np.ndarray, bool]:
    """Pure-strategy NE of the finite game by round-robin best response.

    Starts from the all-zero profile (the game's smallest point) and iterates
    until no follower moves. Returns (action indices, power profile,
    converged); a cycle shows up as converged = False after max_rounds.
    """
    K = net.num_followers
    idx = np.zeros(K, dtype=int)
    profile = np.zeros(K)
    for _ in range(max_rounds):
        moved = False
        for k in range(1, K + 1):
            j = discrete_best_response(net, k, profile, prices, action_sets[k - 1])
            if j != idx[k - 1]:
                idx[k - 1] = j
                profile[k - 1] = action_sets[k - 1].powers[j]
                moved = True
        if not moved:
            return idx, profile, True
    return idx, profile, False


@dataclass
class LearningState:
    """Mutable state of the coupled learning processes for all followers."""

    action_sets: list
    U: np.ndarray  # (K, M) payoff estimates
    pi: np.ndarray  # (K, M) mixed strategies
    t: int
    tau: float
    alpha1: PowerLawSchedule
    alpha2: PowerLawSchedule
    rng_seed: int
    rng: np.random.Generator = field(repr=False, default=None)
    schedule_report: ScheduleReport = None


def initial_state(
    action_sets,
    tau: float = 1.0,
    alpha1: PowerLawSchedule = PowerLawSchedule(),
    alpha2: PowerLawSchedule = PowerLawSchedule(c=2.0),
    rng_seed: int = 0,
) -> LearningState:
    """Uniform strategies, zero payoff estimates, step counter at 0."""
    sizes = {len(a) for a in action_sets}
    if len(sizes) != 1:
        raise ValueError("learning requires a common action-set size M")
    M = sizes.pop()
    K = len(action_sets)
    if tau <= 0.0:
        raise ValueError("tau must be positive")
    return LearningState(
        action_sets=list(action_sets),
        U=np.zeros((K, M)),
        pi=np.full((K, M), 1.0 / M),
        t=0,
        tau=tau,
        alpha1=alpha1,
        alpha2=alpha2,
        rng_seed=rng_seed,
        rng=np.random.default_rng(rng_seed),
        schedule_report=validate_schedules(alpha1, alpha2),
    )


def learning_step(state: LearningState, net: NetworkInstance, prices) -> LearningState:
    """One slot of the coupled processes; mutates and returns ``state``.

    (a) every follower samples an action from its pi_k; (b) realized payoffs
    come from the pure joint profile; (c) U moves toward the observation
    with step alpha1(t), only at the sampled action; (d) pi moves toward
    logit_response(U_k) with step alpha2(t) in all components (an exact
    convex combination, so the simplex is preserved); (e) t advances.
    """
    t = state.t + 1
    a1 = state.alpha1(t)
    a2 = state.alpha2(t)
    K, M = state.pi.shape
    lam = np.asarray(prices, dtype=float)

    draws = state.rng.random(K)
    sampled = np.empty(K, dtype=int)
    profile = np.empty(K)
    for i in range(K):
        j = int(np.searchsorted(np.cumsum(state.pi[i]), draws[i]))
        if j >= M:
            j = M - 1
        sampled[i] = j
        profile[i] = state.action_sets[i].powers[j]

    # Realized payoffs from the pure joint action, vectorized over followers.
    g = net.gain
    inter = profile @ g[1:, 1:]  # sum_j p_j * h_jk including j = k
    denom = net.noise[1:] + g[0, 1:] * net.mu_power + inter - np.diag(g[1:, 1:]) * profile
    gamma = np.diag(g[1:, 1:]) * profile / denom
    psi = net.bandwidth * np.log1p(gamma) / (profile + net.circuit_power)
    payoff = psi - lam * g[1:, 0] * profile

    rows = np.arange(K)
    state.U[rows, sampled] += a1 * (payoff - state.U[rows, sampled])
    shifted = (state.U - state.U.max(axis=1, keepdims=True)) / state.tau
    e = np.exp(shifted)
    beta = e / e.sum(axis=1, keepdims=True)
    state.pi *= 1.0 - a2
    state.pi += a2 * beta
    state.t = t
    return state


@dataclass
class LearningReport:
    """Outcome of one run_learning call."""

    strategies: np.ndarray  # final pi, (K, M)
    U: np.ndarray  # final payoff estimates, (K, M)
    expected_power_trace: np.ndarray  # (iterations, K)
    pi_trace: np.ndarray | None  # (iterations, K, M) when recorded
    iterations: int
    converged: bool


def run_learning(
    net: NetworkInstance,
    prices,
    state: LearningState,
    tol: float = 1e-3,
    window: int = 50,
    max_iters: int = 10_000,
    record_pi: bool = True,
) -> LearningReport:
    """Iterate learning_step until the strategies settle or max_iters.

    Convergence detector: over a sliding window of ``window`` iterations,
    the largest per-component range of any pi_k falls below ``tol``.
    """
    if window < 2:
        raise ValueError("window must be >= 2")
    K, M = state.pi.shape
    powers = np.vstack([a.powers for a in state.action_sets])
    power_trace = []
    pi_trace = [] if record_pi else None
    recent = []
    converged = False
    iterations = 0
    for iterations in range(1, max_iters + 1):
        learning_step(state, net, prices)
        power_trace.append((state.pi * powers).sum(axis=1))
        if record_pi:
            pi_trace.append(state.pi.copy())
        recent.append(state.pi.copy())
        if len(recent) > window:
            recent.pop(0)
        if len(recent) == window:
            stacked = np.asarray(recent)
            if float(np.max(stacked.max(axis=0) - stacked.min(axis=0))) < tol:
                converged = True
                break
    return LearningReport(
        strategies=state.pi.copy(),
        U=state.U.copy(),
        expected_power_trace=np.asarray(power_trace),
        pi_trace=np.asarray(pi_trace) if record_pi else None,
        iterations=iterations,
        converged=converged,
    )


def write_learning_csv(report: LearningReport, path) -> None:
    """Export a learning trace CSV: iteration,k,expected_power,pi_0..pi_{M-1}.

    Requires the report to carry a pi trace.
    """
    if report.pi_trace is None:
        raise ValueError("report has no pi trace; rerun with record_pi=True")
    T, K, M = report.pi_trace.shape
    header = ["iteration", "k", "expected_power"] + [f"pi_{j}" for j in range(M)]
    rows = []
    for t in range(T):
        for k in range(K):
            rows.append(
                (t + 1, k + 1, float(report.expected_power_trace[t, k]))
                + tuple(float(x) for x in report.pi_trace[t, k])
            )
    write_rows(path, header, rows)
