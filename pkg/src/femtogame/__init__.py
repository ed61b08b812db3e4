"""Power allocation game for two-tier femtocell networks.

A macrocell base station (the leader) charges per-link interference prices;
femtocell user/access-point links (the followers) respond by maximizing
energy efficiency. The package provides the network model, the continuous
best-response game, price selection for the leader, a discrete stochastic
learning variant, independent verification oracles, and an experiment
harness with a CLI front end.
"""

from .continuous import (
    BisectionError,
    BrSchedule,
    EquilibriumReport,
    best_response,
    check_supermodularity,
    check_uniqueness_condition,
    run_algorithm1,
    write_trace_csv,
)
from .defaults import default_constants, default_topology
from .discrete import (
    ActionSet,
    LearningReport,
    LearningState,
    PowerLawSchedule,
    ScheduleReport,
    default_action_sets,
    discrete_best_response,
    discrete_equilibrium,
    expected_follower_payoff,
    expected_leader_revenue,
    expected_powers,
    initial_state,
    learning_step,
    logit_response,
    run_learning,
    validate_schedules,
    validate_simplex,
    write_learning_csv,
)
from .experiments import (
    EXPERIMENT_IDS,
    ExperimentSpec,
    MonteCarloResult,
    config_hash,
    montecarlo,
    run_experiment,
)
from .network import (
    NetworkInstance,
    TopologyConfig,
    dbm_to_watts,
    generate_topology,
    sinr_follower,
    sinr_macro,
    watts_to_dbm,
)
from .payoff import (
    cross_second_derivative,
    efficiency,
    follower_payoff,
    interference_denominator,
    leader_revenue,
    payoff_gradient,
    validate_power_profile,
    validate_prices,
)
from .pricing import (
    Algorithm2Result,
    LearnerConfig,
    PriceSearchConfig,
    PriceSearchResult,
    ZeroPriceResult,
    algorithm2_price_step,
    asymptote_price,
    cutoff_price,
    run_algorithm2,
    se_price_search,
    zero_price_equilibrium,
)
from .scenario import (
    Scenario,
    ScenarioError,
    load_scenario,
    network_from_scenario,
    save_network,
)

__version__ = "0.1.0"
