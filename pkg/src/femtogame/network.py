"""Two-tier network model: topology generation, channel gains, and SINR.

Index convention used throughout the package: link 0 is the macrocell pair
(MU transmitter -> MBS receiver); links 1..K are the femtocell pairs
(FU transmitter -> FAP receiver). The gain matrix entry ``gain[i, j]`` is the
linear power gain from the transmitter of pair i to the receiver of pair j,
so ``gain[k, 0]`` is FU k's cross-tier gain into the MBS and ``gain[0, k]``
is the MU's interference gain into FAP k. Follower-indexed vectors such as
power profiles have length K and are addressed with ``k - 1``.

All powers are linear watts internally; dBm appears only at I/O boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "NetworkInstance",
    "TopologyConfig",
    "dbm_to_watts",
    "watts_to_dbm",
    "generate_topology",
    "sinr_macro",
    "sinr_follower",
]


def dbm_to_watts(x: float) -> float:
    """Convert a power level in dBm to linear watts: 10^((x - 30)/10)."""
    return 10.0 ** ((x - 30.0) / 10.0)


def watts_to_dbm(p: float) -> float:
    """Convert linear watts to dBm. Requires p > 0."""
    if p <= 0.0:
        raise ValueError("watts_to_dbm requires a strictly positive power")
    return 10.0 * math.log10(p) + 30.0


@dataclass(frozen=True)
class TopologyConfig:
    """Geometry and randomness knobs for topology generation.

    Parameters
    ----------
    macro_radius : float
        Radius of the macro disc (meters). FAPs and the MU are dropped
        uniformly inside it, centered on the MBS.
    femto_user_radius : float
        Radius of the disc around each FAP in which its FU is dropped.
    pathloss_exponent_fu : float
        Exponent for intra-femto links (FU->own FAP, FU->other FAPs).
    pathloss_exponent_mu : float
        Exponent for links involving the macro tier (MU->MBS, MU->FAP,
        FU->MBS).
    min_distance : float
        Lower clamp on every pairwise distance, keeps d^-k finite.
    rng_seed : int
        Seed; generation is bit-reproducible for a fixed seed.
    shadowing_sigma_db : float
        Standard deviation (dB) of an optional lognormal gain multiplier.
        Default 0 (off): the pathloss formula is exactly d^-k.
    """

    macro_radius: float = 300.0
    femto_user_radius: float = 15.0
    pathloss_exponent_fu: float = 4.0
    pathloss_exponent_mu: float = 2.5
    min_distance: float = 1.0
    rng_seed: int = 0
    shadowing_sigma_db: float = 0.0

    def __post_init__(self) -> None:
        if self.macro_radius <= 0 or self.femto_user_radius <= 0:
            raise ValueError("radii must be positive")
        if self.pathloss_exponent_fu <= 0 or self.pathloss_exponent_mu <= 0:
            raise ValueError("pathloss exponents must be positive")
        if self.min_distance <= 0:
            raise ValueError("min_distance must be positive")


@dataclass(frozen=True)
class NetworkInstance:
    """Immutable snapshot of one scenario: gains, noise, and power limits.

    Fields
    ------
    num_followers : int
        K, the number of FU-FAP links (>= 1).
    bandwidth : float
        System bandwidth W in Hz.
    gain : (K+1, K+1) ndarray
        Linear power gains; see the module docstring for the index convention.
    noise : (K+1,) ndarray
        Receiver noise powers in watts; noise[0] is the MBS, noise[k] FAP k.
    mu_power : float
        Fixed MU transmit power p_0 in watts.
    power_max : (K,) ndarray
        Per-follower transmit power ceilings in watts.
    circuit_power : float
        Shared circuit power p_a in watts, added to transmit power in the
        efficiency denominator.
    mu_sinr_threshold : float
        Cross-tier SINR requirement at the MBS, linear ratio.
    positions : dict
        Optional generator metadata (node coordinates); not used by any
        computation, carried for traceability. Empty for hand-built instances.
    """

    num_followers: int
    bandwidth: float
    gain: np.ndarray
    noise: np.ndarray
    mu_power: float
    power_max: np.ndarray
    circuit_power: float
    mu_sinr_threshold: float
    positions: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        K = self.num_followers
        if K < 1:
            raise ValueError("need at least one follower link")
        gain = np.asarray(self.gain, dtype=float)
        noise = np.asarray(self.noise, dtype=float)
        power_max = np.asarray(self.power_max, dtype=float)
        if gain.shape != (K + 1, K + 1):
            raise ValueError(f"gain must be ({K+1}, {K+1}), got {gain.shape}")
        if noise.shape != (K + 1,):
            raise ValueError(f"noise must have length {K+1}")
        if power_max.shape != (K,):
            raise ValueError(f"power_max must have length {K}")
        if not np.all(np.isfinite(gain)) or np.any(gain <= 0.0):
            raise ValueError("all gains must be strictly positive and finite")
        if not np.all(np.isfinite(noise)) or np.any(noise <= 0.0):
            raise ValueError("all noise powers must be strictly positive")
        if not np.all(np.isfinite(power_max)) or np.any(power_max <= 0.0):
            raise ValueError("power_max entries must be in (0, inf)")
        if not (self.circuit_power > 0.0 and math.isfinite(self.circuit_power)):
            raise ValueError("circuit_power must be positive and finite")
        if not (self.mu_power > 0.0 and math.isfinite(self.mu_power)):
            raise ValueError("mu_power must be positive and finite")
        if not (self.mu_sinr_threshold > 0.0):
            raise ValueError("mu_sinr_threshold must be positive")
        for arr in (gain, noise, power_max):
            arr.setflags(write=False)
        object.__setattr__(self, "gain", gain)
        object.__setattr__(self, "noise", noise)
        object.__setattr__(self, "power_max", power_max)


def _uniform_disc(rng: np.random.Generator, radius: float, center: np.ndarray) -> np.ndarray:
    """Uniform point in a disc via sqrt-radius sampling."""
    r = radius * math.sqrt(rng.random())
    theta = 2.0 * math.pi * rng.random()
    return center + np.array([r * math.cos(theta), r * math.sin(theta)])


def generate_topology(
    cfg: TopologyConfig,
    num_followers: int,
    *,
    bandwidth: float,
    noise_power: float,
    mu_power: float,
    power_max: float,
    circuit_power: float,
    mu_sinr_threshold: float,
) -> NetworkInstance:
    """Drop a random two-tier topology and derive its gain matrix.

    The MBS sits at the origin. FAPs and the MU are uniform in the macro
    disc; each FU is uniform in a disc of radius ``cfg.femto_user_radius``
    around its FAP. Gains are d^-k with the exponent chosen per link family
    (macro-involved links use ``pathloss_exponent_mu``, intra-femto links
    ``pathloss_exponent_fu``) and every distance clamped below by
    ``cfg.min_distance``. Deterministic for a fixed ``cfg.rng_seed``.

    Parameters
    ----------
    cfg : TopologyConfig
        Geometry and seed.
    num_followers : int
        Number of FU-FAP links K >= 1.
    bandwidth, noise_power, mu_power, power_max, circuit_power, mu_sinr_threshold :
        Scenario constants (watts / Hz / linear ratio). ``noise_power`` and
        ``power_max`` are scalars here and broadcast to all receivers and
        followers; build ``NetworkInstance`` directly for heterogeneous values.

    Returns
    -------
    NetworkInstance
    """
    if num_followers < 1:
        raise ValueError("num_followers must be >= 1")
    K = num_followers
    rng = np.random.default_rng(cfg.rng_seed)

    mbs = np.zeros(2)
    mu = _uniform_disc(rng, cfg.macro_radius, mbs)
    faps = np.array([_uniform_disc(rng, cfg.macro_radius, mbs) for _ in range(K)])
    fus = np.array([_uniform_disc(rng, cfg.femto_user_radius, faps[i]) for i in range(K)])

    # Transmitter of pair 0 is the MU, of pair k the FU; receiver of pair 0
    # is the MBS, of pair k the FAP.
    tx = np.vstack([mu, fus])
    rx = np.vstack([mbs, faps])
    diff = tx[:, None, :] - rx[None, :, :]
    dist = np.maximum(np.sqrt((diff**2).sum(axis=2)), cfg.min_distance)

    expo = np.full((K + 1, K + 1), cfg.pathloss_exponent_fu)
    expo[0, :] = cfg.pathloss_exponent_mu
    expo[:, 0] = cfg.pathloss_exponent_mu
    gain = dist**-expo
    if cfg.shadowing_sigma_db > 0.0:
        shadow_db = rng.normal(0.0, cfg.shadowing_sigma_db, size=gain.shape)
        gain = gain * 10.0 ** (shadow_db / 10.0)
    if not np.all(np.isfinite(gain)) or np.any(gain <= 0.0):
        raise ValueError("generated gains are not finite/positive; check min_distance")

    return NetworkInstance(
        num_followers=K,
        bandwidth=bandwidth,
        gain=gain,
        noise=np.full(K + 1, noise_power),
        mu_power=mu_power,
        power_max=np.full(K, power_max),
        circuit_power=circuit_power,
        mu_sinr_threshold=mu_sinr_threshold,
        positions={
            "mbs": mbs.tolist(),
            "mu": mu.tolist(),
            "faps": faps.tolist(),
            "fus": fus.tolist(),
        },
    )


def sinr_macro(net: NetworkInstance, p: np.ndarray) -> float:
    """SINR of the macro link at the MBS under follower powers p.

    Returns h_00*p_0 / (N_0 + sum_k h_k0*p_k).
    """
    p = np.asarray(p, dtype=float)
    interference = float(np.dot(net.gain[1:, 0], p))
    return net.gain[0, 0] * net.mu_power / (net.noise[0] + interference)


def sinr_follower(net: NetworkInstance, k: int, p: np.ndarray) -> float:
    """SINR of follower link k (1-based) at its FAP.

    Returns h_kk*p_k / (N_k + h_0k*p_0 + sum_{j != k} h_jk*p_j).
    """
    if not 1 <= k <= net.num_followers:
        raise ValueError(f"follower index {k} out of range 1..{net.num_followers}")
    p = np.asarray(p, dtype=float)
    cross = float(np.dot(net.gain[1:, k], p)) - net.gain[k, k] * p[k - 1]
    denom = net.noise[k] + net.gain[0, k] * net.mu_power + cross
    return net.gain[k, k] * p[k - 1] / denom
