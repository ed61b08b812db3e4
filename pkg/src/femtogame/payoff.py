"""Utilities, revenue, and derivatives for both tiers.

Everything here is a pure function of an immutable ``NetworkInstance``, a
follower power profile ``p`` (length K, watts), and a price vector
``prices`` (length K, nonnegative). Follower indices are 1-based to match
the gain-matrix convention (index 0 = macro link).
"""

from __future__ import annotations

import math

import numpy as np

from .network import NetworkInstance, sinr_follower

__all__ = [
    "validate_power_profile",
    "validate_prices",
    "interference_denominator",
    "efficiency",
    "follower_payoff",
    "leader_revenue",
    "payoff_gradient",
    "cross_second_derivative",
]


def validate_power_profile(net: NetworkInstance, p: np.ndarray) -> np.ndarray:
    """Check 0 <= p_k <= p_max componentwise; returns p as a float array."""
    p = np.asarray(p, dtype=float)
    if p.shape != (net.num_followers,):
        raise ValueError(f"power profile must have length {net.num_followers}")
    if np.any(p < 0.0) or np.any(p > net.power_max) or not np.all(np.isfinite(p)):
        raise ValueError("power profile out of [0, p_max] bounds")
    return p


def validate_prices(net: NetworkInstance, prices: np.ndarray) -> np.ndarray:
    """Check prices are finite and componentwise >= 0; returns float array."""
    lam = np.asarray(prices, dtype=float)
    if lam.shape != (net.num_followers,):
        raise ValueError(f"price vector must have length {net.num_followers}")
    if np.any(lam < 0.0) or not np.all(np.isfinite(lam)):
        raise ValueError("prices must be finite and nonnegative")
    return lam


def interference_denominator(net: NetworkInstance, k: int, p: np.ndarray) -> float:
    """Noise-plus-interference seen by FAP k: N_k + h_0k*p_0 + sum_{j!=k} h_jk*p_j.

    This is the denominator of the follower SINR and of the derivative
    coefficients G_k and H_k; it does not depend on p_k itself.
    """
    p = np.asarray(p, dtype=float)
    cross = float(np.dot(net.gain[1:, k], p)) - net.gain[k, k] * p[k - 1]
    return float(net.noise[k] + net.gain[0, k] * net.mu_power + cross)


def efficiency(net: NetworkInstance, k: int, p: np.ndarray) -> float:
    """Energy efficiency of follower k: W * log(1 + gamma_k) / (p_k + p_a).

    Natural logarithm; the value is 0 at p_k = 0.
    """
    gamma = sinr_follower(net, k, p)
    return net.bandwidth * math.log1p(gamma) / (p[k - 1] + net.circuit_power)


def follower_payoff(net: NetworkInstance, k: int, p: np.ndarray, prices: np.ndarray) -> float:
    """Net payoff of follower k: efficiency minus the interference payment.

    psi(gamma_k, p_k) - lambda_k * h_k0 * p_k.
    """
    return efficiency(net, k, p) - prices[k - 1] * net.gain[k, 0] * p[k - 1]


def leader_revenue(net: NetworkInstance, p: np.ndarray, prices: np.ndarray) -> float:
    """Total payment collected by the MBS: sum_k lambda_k * h_k0 * p_k."""
    p = np.asarray(p, dtype=float)
    lam = np.asarray(prices, dtype=float)
    return float(np.sum(lam * net.gain[1:, 0] * p))


def payoff_gradient(net: NetworkInstance, k: int, p: np.ndarray, prices: np.ndarray) -> float:
    """d u_k / d p_k in closed form.

    -W*log(1+gamma_k)/(p_k+p_a)^2 + W*G_k/((1+gamma_k)(p_k+p_a)) - lambda_k*h_k0
    with G_k = h_kk / (N_k + h_0k*p_0 + sum_{j!=k} h_jk*p_j). Continuous at
    p_k = 0, where it reduces to W*G_k/p_a - lambda_k*h_k0.
    """
    denom = interference_denominator(net, k, p)
    G = net.gain[k, k] / denom
    pk = p[k - 1]
    pa = net.circuit_power
    gamma = G * pk
    W = net.bandwidth
    total = pk + pa
    return (
        -W * math.log1p(gamma) / (total * total)
        + W * G / ((1.0 + gamma) * total)
        - prices[k - 1] * net.gain[k, 0]
    )


def cross_second_derivative(net: NetworkInstance, k: int, j: int, p: np.ndarray) -> float:
    """d^2 u_k / (d p_k d p_j) for j != k in closed form.

    W * H_k * [ p_k/((1+gamma_k)(p_k+p_a)^2)
                + gamma_k/((1+gamma_k)^2 (p_k+p_a))
                - 1/((1+gamma_k)(p_k+p_a)) ]
    with H_k = h_jk*h_kk / (N_k + h_0k*p_0 + sum_{i!=k} h_ik*p_i)^2. The
    bracket is >= 0 exactly when gamma_k >= p_a/p_k (increasing differences).
    """
    if j == k:
        raise ValueError("cross derivative requires j != k")
    if not 1 <= j <= net.num_followers:
        raise ValueError(f"follower index {j} out of range 1..{net.num_followers}")
    denom = interference_denominator(net, k, p)
    H = net.gain[j, k] * net.gain[k, k] / (denom * denom)
    pk = p[k - 1]
    pa = net.circuit_power
    gamma = net.gain[k, k] * pk / denom
    total = pk + pa
    one_plus = 1.0 + gamma
    bracket = (
        pk / (one_plus * total * total)
        + gamma / (one_plus * one_plus * total)
        - 1.0 / (one_plus * total)
    )
    return net.bandwidth * H * bracket
