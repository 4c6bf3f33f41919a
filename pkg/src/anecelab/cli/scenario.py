"""
Scenario files: versioned YAML experiment records.

    version: 1
    scheme: all_user            # all_user | pairwise | modified_two_user
    seed: 7
    mc_samples: 2000
    rank_draws: 100
    snr_grid: [12, 14, 16, 18, 20, 22, 24]
    pair: [1, 2]                # one-based, all_user and pairwise only
    network:
      antennas: [2, 2, 2]       # all_user and pairwise
      n_eve: 4
      k2: 2
      k1: 4                     # optional, defaults to N_T - N_min

For modified_two_user the network block holds n1, n2, k_total and n_eve.
Unknown keys are rejected and every violation names its key path.
"""

from dataclasses import dataclass, replace
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

import yaml

from anecelab.capacity import DEFAULT_MC_SAMPLES
from anecelab.dofcalc import Scheme, UnknownSchemeError, sessions
from anecelab.model import (
    InvalidGridError,
    NetworkConfig,
    SnrGrid,
    TwoUserModifiedConfig,
    validate_config,
    validate_two_user,
)
from anecelab.schemes import (
    AllUserScheme,
    AneceScheme,
    ModifiedTwoUserScheme,
    PairwiseScheme,
)
from anecelab.verify.suites import DEFAULT_RANK_DRAWS

SCHEMA_VERSION = 1

TOP_LEVEL_KEYS = (
    "version",
    "scheme",
    "seed",
    "mc_samples",
    "rank_draws",
    "snr_grid",
    "pair",
    "network",
)
NETWORK_KEYS = {
    Scheme.ALL_USER: ("antennas", "n_eve", "k2", "k1"),
    Scheme.PAIRWISE: ("antennas", "n_eve", "k2", "k1"),
    Scheme.MODIFIED_TWO_USER: ("n1", "n2", "k_total", "n_eve"),
}
REQUIRED_NETWORK_KEYS = {
    Scheme.ALL_USER: ("antennas", "n_eve", "k2"),
    Scheme.PAIRWISE: ("antennas", "n_eve", "k2"),
    Scheme.MODIFIED_TWO_USER: ("n1", "n2", "k_total", "n_eve"),
}

# violation message prefix -> key path, first match wins
VIOLATION_KEYS = {
    Scheme.ALL_USER: (
        ("M <", "network.antennas"),
        ("N_E", "network.n_eve"),
        ("K_2", "network.k2"),
        ("K_1", "network.k1"),
        ("N_", "network.antennas"),
    ),
    Scheme.MODIFIED_TWO_USER: (
        ("N_E", "network.n_eve"),
        ("N_1", "network.n1"),
        ("N_2", "network.n2"),
        ("K <", "network.k_total"),
    ),
}
VIOLATION_KEYS[Scheme.PAIRWISE] = VIOLATION_KEYS[Scheme.ALL_USER]


class ScenarioError(Exception):
    pass


@dataclass(frozen=True)
class ScenarioFile:
    """
    A parsed and validated scenario.

    Attributes
    ----------
    scheme: Scheme
        The ANECE variant.
    network: NetworkConfig or TwoUserModifiedConfig
        NetworkConfig for all_user and pairwise, TwoUserModifiedConfig
        for modified_two_user.
    snr_grid: SnrGrid
        log2(sigma^2) points for capacity curves.
    mc_samples: int
        Monte Carlo samples per grid point.
    seed: int
        Root of every random substream.
    pair: tuple of int
        Zero-based reported user pair.
    rank_draws: int
        Independent draws per rank-oracle check.
    """

    scheme: Scheme
    network: Union[NetworkConfig, TwoUserModifiedConfig]
    snr_grid: SnrGrid
    mc_samples: int
    seed: int
    pair: Tuple[int, int] = (0, 1)
    rank_draws: int = DEFAULT_RANK_DRAWS

    def with_overrides(
        self, seed: Optional[int] = None, mc_samples: Optional[int] = None
    ) -> "ScenarioFile":
        changes: Dict[str, int] = {}
        if seed is not None:
            if seed < 0:
                raise ScenarioError(f"seed: must be non-negative, got {seed}")
            changes["seed"] = seed
        if mc_samples is not None:
            if mc_samples < 1:
                raise ScenarioError(f"mc_samples: must be positive, got {mc_samples}")
            changes["mc_samples"] = mc_samples
        return replace(self, **changes)

    def build_scheme(self) -> AneceScheme:
        if self.scheme is Scheme.ALL_USER:
            return AllUserScheme(self.network, self.pair)
        if self.scheme is Scheme.PAIRWISE:
            return PairwiseScheme(self.network, self.pair)
        return ModifiedTwoUserScheme(self.network)


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _require_int(data: Mapping, key: str, path: str, errors: List[str]) -> Optional[int]:
    value = data[key]
    if not _is_int(value):
        errors.append(f"{path}: expected an integer, got {value!r}")
        return None
    return value


def _unknown_keys(data: Mapping, allowed, prefix: str) -> List[str]:
    return [f"unknown key '{prefix}{key}'" for key in data if key not in allowed]


def _violation_path(scheme: Scheme, message: str) -> str:
    for prefix, path in VIOLATION_KEYS[scheme]:
        if message.startswith(prefix):
            return path
    return "network"


def _parse_network(
    scheme: Scheme, data: Any, errors: List[str]
) -> Optional[Union[NetworkConfig, TwoUserModifiedConfig]]:
    if not isinstance(data, Mapping):
        errors.append("network: expected a mapping")
        return None

    errors.extend(_unknown_keys(data, NETWORK_KEYS[scheme], "network."))
    missing = [k for k in REQUIRED_NETWORK_KEYS[scheme] if k not in data]
    errors.extend(f"network.{k}: required key missing" for k in missing)
    if missing:
        return None

    if scheme is Scheme.MODIFIED_TWO_USER:
        values = {
            k: _require_int(data, k, f"network.{k}", errors) for k in NETWORK_KEYS[scheme]
        }
        if any(v is None for v in values.values()):
            return None
        cfg2u = TwoUserModifiedConfig(**values)
        errors.extend(f"{_violation_path(scheme, v)}: {v}" for v in validate_two_user(cfg2u))
        return cfg2u

    antennas = data["antennas"]
    if not isinstance(antennas, list) or not all(_is_int(n) for n in antennas):
        errors.append(f"network.antennas: expected a list of integers, got {antennas!r}")
        return None
    values = {
        k: _require_int(data, k, f"network.{k}", errors)
        for k in ("n_eve", "k2", "k1")
        if k in data
    }
    if any(v is None for v in values.values()):
        return None
    cfg = NetworkConfig(antennas=tuple(antennas), **values)
    errors.extend(f"{_violation_path(scheme, v)}: {v}" for v in validate_config(cfg))
    if scheme is Scheme.PAIRWISE and cfg.m >= 2 and cfg.k2 % sessions(cfg.m):
        errors.append(
            f"network.k2: K_2 = {cfg.k2} is not divisible by P_0 = {sessions(cfg.m)}"
        )
    return cfg


def _parse_pair(data: Any, m: int, errors: List[str]) -> Tuple[int, int]:
    if (
        not isinstance(data, list)
        or len(data) != 2
        or not all(_is_int(u) for u in data)
    ):
        errors.append(f"pair: expected two user numbers, got {data!r}")
        return (0, 1)
    i, j = data
    if i == j or not (1 <= i <= m and 1 <= j <= m):
        errors.append(f"pair: need two distinct users in 1..{m}, got {data!r}")
        return (0, 1)
    return (i - 1, j - 1)


def scenario_from_dict(data: Any) -> ScenarioFile:
    if not isinstance(data, Mapping):
        raise ScenarioError("Scenario must be a mapping at the top level")

    errors = _unknown_keys(data, TOP_LEVEL_KEYS, "")
    if data.get("version") != SCHEMA_VERSION:
        errors.append(f"version: expected {SCHEMA_VERSION}, got {data.get('version')!r}")

    try:
        scheme = Scheme.parse(data.get("scheme", Scheme.ALL_USER.value))
    except UnknownSchemeError as exc:
        raise ScenarioError(f"scheme: {exc}")

    if "network" not in data:
        errors.append("network: required key missing")
        network = None
    else:
        network = _parse_network(scheme, data["network"], errors)

    pair = (0, 1)
    if "pair" in data:
        if scheme is Scheme.MODIFIED_TWO_USER:
            errors.append("pair: not used by modified_two_user")
        elif isinstance(network, NetworkConfig):
            pair = _parse_pair(data["pair"], network.m, errors)

    scalars = {"seed": 0, "mc_samples": DEFAULT_MC_SAMPLES, "rank_draws": DEFAULT_RANK_DRAWS}
    for key in scalars:
        if key in data:
            value = _require_int(data, key, key, errors)
            if value is not None and value < (0 if key == "seed" else 1):
                errors.append(f"{key}: out of range, got {value}")
            elif value is not None:
                scalars[key] = value

    grid = SnrGrid()
    if "snr_grid" in data:
        points = data["snr_grid"]
        if not isinstance(points, list) or not all(
            isinstance(p, (int, float)) and not isinstance(p, bool) for p in points
        ):
            errors.append(f"snr_grid: expected a list of numbers, got {points!r}")
        else:
            try:
                grid = SnrGrid(tuple(points))
            except InvalidGridError as exc:
                errors.append(f"snr_grid: {exc}")

    if errors:
        raise ScenarioError("; ".join(errors))

    return ScenarioFile(
        scheme=scheme,
        network=network,
        snr_grid=grid,
        pair=pair,
        **scalars,
    )


def parse_scenario(path: str) -> ScenarioFile:
    try:
        with open(path, "r") as f:
            data = yaml.safe_load(f)
    except FileNotFoundError:
        raise ScenarioError(f"Scenario file not found. path={path}")
    except yaml.YAMLError:
        raise ScenarioError(f"Failed to parse scenario file. path={path}")

    try:
        return scenario_from_dict(data)
    except ScenarioError as exc:
        raise ScenarioError(f"{exc}. path={path}")
