"""
A closed-form price instead of a search
=======================================

The revenue-optimal interference price takes a grid search with a full
follower-equilibrium solve at every candidate. The intersection of the
low- and high-price payment asymptotes gives a closed-form alternative in
one line of algebra. This script compares the two on a handful of random
layouts: the shortcut gives up most of the revenue but leaves the
followers far better off.
"""

import numpy as np

from femtogame import (
    default_constants,
    default_topology,
    generate_topology,
    leader_revenue,
    run_algorithm1,
)
from femtogame.experiments import mean_efficiency
from femtogame.network import TopologyConfig, sinr_macro
from femtogame.pricing import PriceSearchConfig, asymptote_price, se_price_search, zero_price_equilibrium

K = 4
print(f"{'seed':>4} {'eff @ closed-form':>18} {'eff @ searched':>15} {'revenue ratio':>14} {'MU SINR a/s':>12}")

for seed in range(8):
    topo = TopologyConfig(rng_seed=seed)
    net = generate_topology(topo, K, **default_constants())

    zp = zero_price_equilibrium(net)
    lam_a = asymptote_price(net, zp.profile)
    at_a = run_algorithm1(net, lam_a, init=zp.profile).final_profile

    # the expensive route: geometric grid plus local refinement
    searched = se_price_search(net, PriceSearchConfig(grid_count=24))

    eff_a = mean_efficiency(net, at_a)
    eff_s = mean_efficiency(net, searched.equilibrium)
    rev_a = leader_revenue(net, at_a, lam_a)
    print(
        f"{seed:>4} {eff_a:>18.3e} {eff_s:>15.3e} "
        f"{rev_a / searched.revenue:>14.3f} "
        f"{sinr_macro(net, at_a) / sinr_macro(net, searched.equilibrium):>12.2f}"
    )

print(
    "\nthe closed-form price keeps follower efficiency above the searched"
    "\noptimum on every draw, at a fraction of the leader's revenue; the"
    "\nmacro user pays for it with a somewhat lower SINR."
)
