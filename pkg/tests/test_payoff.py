"""Payoff-side formulas against hand values and finite-difference oracles."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from femtogame import (
    cross_second_derivative,
    efficiency,
    follower_payoff,
    interference_denominator,
    leader_revenue,
    payoff_gradient,
    validate_power_profile,
    validate_prices,
)
from femtogame.oracles import finite_difference_cross, finite_difference_gradient

from conftest import hand_net, make_net


def test_efficiency_zero_power_is_zero(hand2):
    assert efficiency(hand2, 1, np.array([0.0, 0.5])) == 0.0


def test_efficiency_unit_case():
    # Constructed so gamma = e - 1 and p + p_a = 1: efficiency is exactly W.
    denom = 0.1 + 0.1 * 1.0
    h11 = (math.e - 1.0) * denom / 0.5
    net = hand_net(
        gain=[[1.0, 0.1], [0.5, h11]],
        noise=[0.1, 0.1],
        mu_power=1.0,
        circuit_power=0.5,
        bandwidth=1.0,
    )
    assert efficiency(net, 1, np.array([0.5])) == pytest.approx(1.0, rel=1e-12)


def test_efficiency_vanishes_at_huge_power():
    net = hand_net(
        gain=[[1.0, 1e-6], [0.5, 2.0]],
        noise=[1e-6, 1e-6],
        power_max=[1e7],
        circuit_power=1e-3,
    )
    grid = np.geomspace(1e-6, 1.0, 2000)
    peak = max(efficiency(net, 1, np.array([p])) for p in grid)
    far = efficiency(net, 1, np.array([1e6 * net.circuit_power]))
    assert far < 1e-3 * peak


def test_follower_payoff_zero_power(hand2):
    assert follower_payoff(hand2, 1, np.array([0.0, 0.4]), np.array([3.0, 3.0])) == 0.0


def test_follower_payoff_zero_price_equals_efficiency(hand2):
    p = np.array([0.6, 0.2])
    assert follower_payoff(hand2, 1, p, np.zeros(2)) == efficiency(hand2, 1, p)


def test_follower_payoff_negative_at_punitive_price(hand2):
    p = np.array([0.6, 0.2])
    grid = np.linspace(1e-6, 1.0, 2000)
    psi_max = max(efficiency(hand2, 1, np.array([x, 0.2])) for x in grid)
    lam = 10.0 * psi_max / (hand2.gain[1, 0] * p[0])
    assert follower_payoff(hand2, 1, p, np.array([lam, 0.0])) < 0.0


def test_leader_revenue_trivial_cases(hand2):
    p = np.array([0.3, 0.7])
    assert leader_revenue(hand2, p, np.zeros(2)) == 0.0
    assert leader_revenue(hand2, np.zeros(2), np.array([5.0, 5.0])) == 0.0


def test_leader_revenue_hand_sum():
    net = hand_net(
        gain=[[1.0, 0.1, 0.1], [0.5, 1.0, 0.1], [0.25, 0.1, 1.0]],
        noise=[0.1, 0.1, 0.1],
        power_max=[2.0, 2.0],
    )
    got = leader_revenue(net, np.array([1.0, 2.0]), np.array([1.0, 2.0]))
    assert got == pytest.approx(1.5, rel=1e-15)


@given(st.floats(min_value=0.0, max_value=10.0), st.floats(min_value=0.0, max_value=10.0))
def test_leader_revenue_linear_in_prices(a, b):
    net = hand_net(
        gain=[[1.0, 0.1, 0.1], [0.5, 1.0, 0.1], [0.25, 0.1, 1.0]],
        noise=[0.1, 0.1, 0.1],
        power_max=[2.0, 2.0],
    )
    p = np.array([0.4, 1.3])
    lam = np.array([a, b])
    assert leader_revenue(net, p, 2.0 * lam) == pytest.approx(
        2.0 * leader_revenue(net, p, lam), rel=1e-12, abs=1e-12
    )


def test_gradient_at_zero_closed_form(hand2):
    p = np.array([0.0, 0.3])
    G = hand2.gain[1, 1] / interference_denominator(hand2, 1, p)
    expected = hand2.bandwidth * G / hand2.circuit_power
    assert payoff_gradient(hand2, 1, p, np.zeros(2)) == pytest.approx(expected, rel=1e-12)
    # A price above W*G/(p_a*h_k0) makes even the first watt unprofitable.
    lam = 1.01 * expected / hand2.gain[1, 0]
    assert payoff_gradient(hand2, 1, p, np.array([lam, 0.0])) < 0.0


def test_gradient_matches_finite_difference():
    rng = np.random.default_rng(42)
    worst = 0.0
    for i in range(100):
        net = make_net(4, seed=i)
        p = rng.uniform(0.005, 0.095, 4)
        lam = np.full(4, 10.0 ** rng.uniform(10, 15))
        k = int(rng.integers(1, 5))

        def u(x, k=k, p=p, lam=lam, net=net):
            q = p.copy()
            q[k - 1] = x
            return follower_payoff(net, k, q, lam)

        fd = finite_difference_gradient(u, p[k - 1], step=1e-6)
        an = payoff_gradient(net, k, p, lam)
        rel = abs(an - fd) / max(abs(an), abs(fd), 1.0)
        worst = max(worst, rel)
    assert worst < 1e-5


def test_cross_derivative_matches_finite_difference():
    rng = np.random.default_rng(43)
    worst = 0.0
    for i in range(100):
        net = make_net(4, seed=1000 + i)
        p = rng.uniform(0.005, 0.095, 4)
        k = int(rng.integers(1, 5))
        j = int(rng.choice([x for x in range(1, 5) if x != k]))

        def u(x, y, k=k, j=j, p=p, net=net):
            q = p.copy()
            q[k - 1] = x
            q[j - 1] = y
            return follower_payoff(net, k, q, np.zeros(4))

        fd = finite_difference_cross(
            u, p[k - 1], p[j - 1], step_x=1e-3, step_y=0.5,
            floor_x=0.01, floor_y=0.01, richardson=True,
        )
        an = cross_second_derivative(net, k, j, p)
        rel = abs(an - fd) / max(abs(an), abs(fd), 1.0)
        worst = max(worst, rel)
    assert worst < 1e-4


def test_cross_derivative_vanishes_without_coupling():
    # h_jk at the positivity floor: the cross term scales linearly with it.
    net = hand_net(
        gain=[[1.0, 0.1, 0.1], [0.5, 1.0, 1e-300], [0.25, 0.2, 1.0]],
        noise=[0.1, 0.1, 0.1],
        power_max=[2.0, 2.0],
    )
    assert abs(cross_second_derivative(net, 2, 1, np.array([0.5, 0.5]))) < 1e-250


def test_cross_derivative_rejects_self_and_range(hand2):
    with pytest.raises(ValueError):
        cross_second_derivative(hand2, 1, 1, np.array([0.1, 0.1]))
    with pytest.raises(ValueError):
        cross_second_derivative(hand2, 1, 3, np.array([0.1, 0.1]))


def test_validators_reject_out_of_bounds(net6):
    with pytest.raises(ValueError):
        validate_power_profile(net6, np.full(6, 0.2))
    with pytest.raises(ValueError):
        validate_power_profile(net6, np.full(5, 0.01))
    with pytest.raises(ValueError):
        validate_prices(net6, np.full(6, -1.0))
