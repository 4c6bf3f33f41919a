"""
Domain types shared by every part of the lab.

Antenna counts, slot counts and DoF values are plain integers. Users are
addressed by zero-based index in code; reports and messages use the
one-based numbering of the protocol description.
"""

import json
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

EVE_NOISE_VAR = 1.0
DEFAULT_SNR_POINTS = (12.0, 14.0, 16.0, 18.0, 20.0, 22.0, 24.0)


class InvalidConfigError(ValueError):
    """
    Raised when a configuration violates its invariants.

    Attributes
    ----------
    violations: list of str
        Every violated constraint, in the wording of validate_config.
    """

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class ShapeMismatchError(ValueError):
    pass


class InvalidGridError(ValueError):
    pass


@dataclass(frozen=True)
class NetworkConfig:
    """
    An all-user (or pair-wise) ANECE scenario.

    Attributes
    ----------
    antennas: tuple of int
        N_1..N_M, one entry per user. M is the length of this tuple.
    n_eve: int
        N_E, the number of antennas on Eve.
    k2: int
        K_2, phase-2 slots per coherence period.
    k1: int
        K_1, phase-1 slots. Defaults to N_T - N_min.
    eve_noise_var: float
        Noise variance at Eve, pinned to 1.
    """

    antennas: Tuple[int, ...]
    n_eve: int
    k2: int
    k1: Optional[int] = None
    eve_noise_var: float = EVE_NOISE_VAR

    def __post_init__(self):
        object.__setattr__(self, "antennas", tuple(int(n) for n in self.antennas))
        if self.k1 is None:
            object.__setattr__(self, "k1", self.min_k1)

    @classmethod
    def symmetric(
        cls, m: int, n: int, n_eve: int, k2: int, k1: Optional[int] = None
    ) -> "NetworkConfig":
        return cls(antennas=(n,) * m, n_eve=n_eve, k2=k2, k1=k1)

    @property
    def m(self) -> int:
        return len(self.antennas)

    @property
    def n_total(self) -> int:
        return sum(self.antennas)

    @property
    def n_min(self) -> int:
        return min(self.antennas) if self.antennas else 0

    @property
    def min_k1(self) -> int:
        return self.n_total - self.n_min

    @property
    def pairs(self) -> List[Tuple[int, int]]:
        """Unordered user pairs (i < j) in session order."""
        return list(combinations(range(self.m), 2))

    @property
    def row_offsets(self) -> Tuple[int, ...]:
        """Row offset of each user's block inside a stacked N_T-row matrix."""
        offsets = [0]
        for n in self.antennas[:-1]:
            offsets.append(offsets[-1] + n)
        return tuple(offsets)

    def others(self, i: int) -> Tuple[int, ...]:
        return tuple(l for l in range(self.m) if l != i)

    def with_updates(self, **changes) -> "NetworkConfig":
        fields = {
            "antennas": self.antennas,
            "n_eve": self.n_eve,
            "k2": self.k2,
            "k1": self.k1,
            "eve_noise_var": self.eve_noise_var,
        }
        # a new antenna layout gets its own minimal K_1 unless one is given
        if "antennas" in changes and "k1" not in changes:
            fields["k1"] = None
        fields.update(changes)
        return NetworkConfig(**fields)


@dataclass(frozen=True)
class TwoUserModifiedConfig:
    """
    Two users with square pilots of unequal lengths.

    Attributes
    ----------
    n1, n2: int
        Antenna counts with N_1 <= N_2.
    k_total: int
        K, slots per coherence period for both nodes.
    n_eve: int
        N_E, the number of antennas on Eve.
    """

    n1: int
    n2: int
    k_total: int
    n_eve: int

    @property
    def n_total(self) -> int:
        return self.n1 + self.n2

    @property
    def delta_n(self) -> int:
        return self.n2 - self.n1

    def as_network(self) -> NetworkConfig:
        """The two-user network used to sample this scenario's channels."""
        return NetworkConfig(
            antennas=(self.n1, self.n2),
            n_eve=self.n_eve,
            k2=max(self.k_total - self.n2, 0),
        )


@dataclass(frozen=True)
class SnrGrid:
    """Ordered log2(sigma^2) values at which capacity curves are evaluated."""

    points: Tuple[float, ...] = DEFAULT_SNR_POINTS

    def __post_init__(self):
        points = tuple(float(p) for p in self.points)
        object.__setattr__(self, "points", points)
        if len(points) < 3:
            raise InvalidGridError(f"SNR grid needs at least 3 points, got {len(points)}")
        if any(not math.isfinite(p) for p in points):
            raise InvalidGridError("SNR grid points must be finite")
        if any(b <= a for a, b in zip(points, points[1:])):
            raise InvalidGridError("SNR grid points must be strictly increasing")

    @classmethod
    def from_range(cls, start: float, stop: float, step: float) -> "SnrGrid":
        """Inclusive arithmetic range of exponents."""
        count = int(round((stop - start) / step)) + 1
        return cls(tuple(start + k * step for k in range(count)))

    @property
    def sigma2(self) -> np.ndarray:
        return np.power(2.0, np.asarray(self.points))


@dataclass(frozen=True)
class DofReport:
    """Analytic DoF values keyed by formula identifier."""

    entries: Mapping[str, int]

    def __post_init__(self):
        normalized: Dict[str, int] = {}
        for key, value in self.entries.items():
            if isinstance(value, (bool, np.bool_)) or int(value) != value:
                raise TypeError(f"DoF value for {key} is not an integer: {value!r}")
            normalized[str(key)] = int(value)
        object.__setattr__(self, "entries", normalized)

    def __getitem__(self, key: str) -> int:
        return self.entries[key]

    def __contains__(self, key: str) -> bool:
        return key in self.entries

    def to_json(self) -> str:
        return json.dumps(self.entries, sort_keys=True)


@dataclass(frozen=True)
class CheckResult:
    """
    One empirical-versus-analytic outcome. A control check carries a
    deliberately wrong target and is expected to fail.
    """

    name: str
    measured: float
    target: float
    tolerance: float
    control: bool = False
    passed: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "measured", float(self.measured))
        object.__setattr__(self, "target", float(self.target))
        object.__setattr__(self, "tolerance", float(self.tolerance))
        object.__setattr__(
            self, "passed", abs(self.measured - self.target) <= self.tolerance
        )

    @property
    def as_expected(self) -> bool:
        return self.passed != self.control

    def retarget(self, offset: float) -> "CheckResult":
        return CheckResult(
            name=self.name,
            measured=self.measured,
            target=self.target + offset,
            tolerance=self.tolerance,
            control=self.control,
        )


def validate_config(cfg: NetworkConfig) -> List[str]:
    violations = []
    if cfg.m < 2:
        violations.append("M < 2")
    for idx, n in enumerate(cfg.antennas, start=1):
        if n < 1:
            violations.append(f"N_{idx} < 1")
    if cfg.n_eve < 0:
        violations.append("N_E < 0")
    if cfg.k2 < 0:
        violations.append("K_2 < 0")
    if cfg.k1 < cfg.min_k1:
        violations.append(f"K_1 < N_T−N_min (need ≥ {cfg.min_k1})")
    if cfg.eve_noise_var != EVE_NOISE_VAR:
        violations.append("ω² ≠ 1")
    return violations


def validate_two_user(cfg2u: TwoUserModifiedConfig) -> List[str]:
    violations = []
    if cfg2u.n1 < 1:
        violations.append("N_1 < 1")
    if cfg2u.n2 < cfg2u.n1:
        violations.append("N_2 < N_1")
    if cfg2u.k_total < cfg2u.n2:
        violations.append(f"K < N_2 (need ≥ {cfg2u.n2})")
    if cfg2u.n_eve < 0:
        violations.append("N_E < 0")
    return violations


def require_valid(cfg: NetworkConfig) -> NetworkConfig:
    violations = validate_config(cfg)
    if violations:
        raise InvalidConfigError(violations)
    return cfg


def require_valid_two_user(cfg2u: TwoUserModifiedConfig) -> TwoUserModifiedConfig:
    violations = validate_two_user(cfg2u)
    if violations:
        raise InvalidConfigError(violations)
    return cfg2u
