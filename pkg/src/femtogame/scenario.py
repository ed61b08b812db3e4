"""Scenario JSON: load, save, and unit-suffix handling.

A scenario file carries either a fully materialized ``network`` block
(every gain and noise value explicit) or a ``topology`` block plus
``constants`` from which a network is generated. Power-typed values accept
either a plain number (linear watts) or a string with a dBm suffix
("27 dBm"); the dimensionless SINR threshold accepts "3 dB". Saved files
always write linear watts as JSON floats, which round-trip exactly.
An optional ``learner`` block configures discrete learning runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import defaults
from .discrete import PowerLawSchedule
from .network import NetworkInstance, TopologyConfig, dbm_to_watts, generate_topology
from .pricing import LearnerConfig

__all__ = [
    "ScenarioError",
    "Scenario",
    "parse_power",
    "parse_ratio",
    "load_scenario",
    "save_network",
    "network_from_scenario",
]


class ScenarioError(ValueError):
    """Malformed or inconsistent scenario file."""


def parse_power(value) -> float:
    """A power field: plain number = watts, '<x> dBm' string converted."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if isinstance(value, str):
        text = value.strip()
        if text.lower().endswith("dbm"):
            try:
                return dbm_to_watts(float(text[:-3].strip()))
            except ValueError as exc:
                raise ScenarioError(f"bad dBm value {value!r}") from exc
        try:
            return float(text)
        except ValueError as exc:
            raise ScenarioError(f"bad power value {value!r}") from exc
    raise ScenarioError(f"bad power value {value!r}")


def parse_ratio(value) -> float:
    """A dimensionless field: plain number = linear, '<x> dB' converted."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if isinstance(value, str):
        text = value.strip()
        if text.lower().endswith("db"):
            try:
                return 10.0 ** (float(text[:-2].strip()) / 10.0)
            except ValueError as exc:
                raise ScenarioError(f"bad dB value {value!r}") from exc
        try:
            return float(text)
        except ValueError as exc:
            raise ScenarioError(f"bad ratio value {value!r}") from exc
    raise ScenarioError(f"bad ratio value {value!r}")


@dataclass
class Scenario:
    """Parsed scenario file."""

    network: NetworkInstance | None
    topology: TopologyConfig | None
    constants: dict
    learner: LearnerConfig
    num_actions: int
    num_followers: int | None


def _parse_network(block: dict) -> NetworkInstance:
    try:
        K = int(block["num_followers"])
        gain = np.array(block["gain"], dtype=float)
        noise = np.array([parse_power(v) for v in block["noise"]])
        power_max = np.array([parse_power(v) for v in block["power_max"]])
        return NetworkInstance(
            num_followers=K,
            bandwidth=float(block["bandwidth_hz"]),
            gain=gain,
            noise=noise,
            mu_power=parse_power(block["mu_power"]),
            power_max=power_max,
            circuit_power=parse_power(block["circuit_power"]),
            mu_sinr_threshold=parse_ratio(block["mu_sinr_threshold"]),
            positions=block.get("positions", {}),
        )
    except KeyError as exc:
        raise ScenarioError(f"network block missing field {exc}") from exc
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc


def _parse_topology(block: dict) -> TopologyConfig:
    known = {
        "macro_radius_m": "macro_radius",
        "femto_user_radius_m": "femto_user_radius",
        "pathloss_exponent_fu": "pathloss_exponent_fu",
        "pathloss_exponent_mu": "pathloss_exponent_mu",
        "min_distance_m": "min_distance",
        "rng_seed": "rng_seed",
        "shadowing_sigma_db": "shadowing_sigma_db",
    }
    kwargs = {}
    for key, value in block.items():
        if key == "num_followers":
            continue
        if key not in known:
            raise ScenarioError(f"unknown topology field {key!r}")
        kwargs[known[key]] = value
    try:
        return TopologyConfig(**kwargs)
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc


def _parse_learner(block: dict) -> tuple[LearnerConfig, int]:
    def schedule(entry, fallback: PowerLawSchedule) -> PowerLawSchedule:
        if entry is None:
            return fallback
        try:
            return PowerLawSchedule(
                a=float(entry.get("a", 1.0)),
                b=float(entry.get("b", 0.0)),
                c=float(entry.get("c", 1.0)),
            )
        except (AttributeError, ValueError) as exc:
            raise ScenarioError(f"bad schedule entry {entry!r}") from exc

    M = int(block.get("M", defaults.NUM_ACTIONS))
    try:
        cfg = LearnerConfig(
            tau=float(block.get("tau", defaults.TAU)),
            alpha1=schedule(block.get("alpha1"), defaults.ALPHA1),
            alpha2=schedule(block.get("alpha2"), defaults.ALPHA2),
            rng_seed=int(block.get("rng_seed", 0)),
            tol=float(block.get("tol", 1e-3)),
            window=int(block.get("window", 50)),
            max_iters=int(block.get("max_iters", 10_000)),
        )
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc
    return cfg, M


def load_scenario(path: str | Path | None) -> Scenario:
    """Parse a scenario JSON file; a None path yields the all-defaults scenario."""
    if path is None:
        raw = {}
    else:
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ScenarioError(f"cannot read scenario {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ScenarioError("scenario root must be a JSON object")

    network = _parse_network(raw["network"]) if "network" in raw else None
    topology = _parse_topology(raw["topology"]) if "topology" in raw else None

    constants = defaults.default_constants()
    for key, value in raw.get("constants", {}).items():
        if key not in constants:
            raise ScenarioError(f"unknown constant {key!r}")
        if key == "mu_sinr_threshold":
            constants[key] = parse_ratio(value)
        elif key == "bandwidth":
            constants[key] = float(value)
        else:
            constants[key] = parse_power(value)

    learner, num_actions = _parse_learner(raw.get("learner", {}))
    num_followers = None
    for block in (raw.get("network"), raw.get("topology")):
        if block and "num_followers" in block:
            num_followers = int(block["num_followers"])
    return Scenario(
        network=network,
        topology=topology,
        constants=constants,
        learner=learner,
        num_actions=num_actions,
        num_followers=num_followers,
    )


def network_from_scenario(
    scenario: Scenario,
    seed: int | None = None,
    num_followers: int | None = None,
) -> NetworkInstance:
    """Materialize the scenario's network, generating one if needed.

    ``seed`` and ``num_followers`` override the scenario for generated
    topologies; they are rejected for fully explicit networks (which have
    no randomness left to reseed).
    """
    if scenario.network is not None:
        if seed is not None or (
            num_followers is not None and num_followers != scenario.network.num_followers
        ):
            raise ScenarioError("explicit network block cannot be reseeded/resized")
        return scenario.network
    cfg = scenario.topology or defaults.default_topology()
    if seed is not None:
        cfg = TopologyConfig(
            macro_radius=cfg.macro_radius,
            femto_user_radius=cfg.femto_user_radius,
            pathloss_exponent_fu=cfg.pathloss_exponent_fu,
            pathloss_exponent_mu=cfg.pathloss_exponent_mu,
            min_distance=cfg.min_distance,
            rng_seed=seed,
            shadowing_sigma_db=cfg.shadowing_sigma_db,
        )
    K = num_followers or scenario.num_followers or 6
    return generate_topology(cfg, K, **scenario.constants)


def save_network(net: NetworkInstance, path: str | Path) -> None:
    """Write a fully explicit scenario file; watt fields round-trip exactly."""
    payload = {
        "network": {
            "num_followers": net.num_followers,
            "bandwidth_hz": net.bandwidth,
            "gain": net.gain.tolist(),
            "noise": net.noise.tolist(),
            "mu_power": net.mu_power,
            "power_max": net.power_max.tolist(),
            "circuit_power": net.circuit_power,
            "mu_sinr_threshold": net.mu_sinr_threshold,
        }
    }
    if net.positions:
        payload["network"]["positions"] = net.positions
    Path(path).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
