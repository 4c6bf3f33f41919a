"""
Gaussian-computable secret-key-capacity terms, in bits per coherence period.

Monte Carlo estimates draw channel realization k from the substream
(seed, "channels", k), so every grid point of a curve sees the same channels
and the estimate does not depend on how samples are scheduled.
"""

import logging
from dataclasses import dataclass
from typing import Callable, NamedTuple, Tuple

import numpy as np

from anecelab.model import (
    NetworkConfig,
    SnrGrid,
    TwoUserModifiedConfig,
    require_valid,
    require_valid_two_user,
)
from anecelab.numkernel.channels import sample_channels
from anecelab.numkernel.covariance import (
    channel_sum,
    pair_channel_sum,
    phase1_joint_cov,
    phase1_rx_cov,
    phase1_rx_cov_transposed,
)
from anecelab.numkernel.linalg import logdet_hpd
from anecelab.numkernel.rng import crandn, substream
from anecelab.pilots import PilotSet

log = logging.getLogger(__name__)

DEFAULT_MC_SAMPLES = 2000
LOG2_E_PI = float(np.log2(np.e * np.pi))


class McEstimate(NamedTuple):
    mean: float
    stderr: float


@dataclass(frozen=True)
class CapacityCurve:
    """
    Attributes
    ----------
    grid: SnrGrid
        The log2(sigma^2) points.
    values: tuple of float
        Capacity at each grid point.
    mc_samples: int
        Samples per point, 0 for exact curves.
    mc_stderr: tuple of float
        Standard error at each point, 0 for exact curves.
    """

    grid: SnrGrid
    values: Tuple[float, ...]
    mc_samples: int = 0
    mc_stderr: Tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        stderr = self.mc_stderr or (0.0,) * len(self.values)
        object.__setattr__(self, "mc_stderr", tuple(float(s) for s in stderr))
        if len(self.values) != len(self.grid.points):
            raise ValueError(
                f"{len(self.values)} values for {len(self.grid.points)} grid points"
            )
        if len(self.mc_stderr) != len(self.values) or min(self.mc_stderr) < 0:
            raise ValueError("standard errors must be non-negative, one per point")


def _estimate(samples: np.ndarray) -> McEstimate:
    samples = np.asarray(samples, dtype=float)
    if samples.size < 2:
        return McEstimate(float(samples.mean()), 0.0)
    return McEstimate(
        float(samples.mean()), float(samples.std(ddof=1) / np.sqrt(samples.size))
    )


def _batched_logdet(stack: np.ndarray, sigma2: float) -> np.ndarray:
    eye = np.eye(stack.shape[-1])
    return np.atleast_1d(logdet_hpd(sigma2 * stack + eye))


def _require_pair(cfg: NetworkConfig, i: int, j: int) -> None:
    if i == j or not (0 <= i < cfg.m and 0 <= j < cfg.m):
        raise ValueError(f"need two distinct users of {cfg.m}, got ({i}, {j})")


def phase1_skc_exact(
    cfg: NetworkConfig, ps: PilotSet, i: int, j: int, sigma2: float
) -> float:
    """
    log2|R_{Y,i}| + log2|R_{Y,j}| - log2|R'_{Y,(i,j)}|, which depends only on
    the pilots and needs no sampling.
    """
    _require_pair(cfg, i, j)
    return (
        logdet_hpd(phase1_rx_cov(ps, i, sigma2))
        + logdet_hpd(phase1_rx_cov_transposed(ps, j, sigma2))
        - logdet_hpd(phase1_joint_cov(ps, i, j, sigma2))
    )


def _cij_stacks(
    cfg: NetworkConfig, i: int, j: int, n_samples: int, seed: int
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    r_i, r_j, r_ij = [], [], []
    for k in range(n_samples):
        ch = sample_channels(cfg, seed, index=k)
        r_i.append(channel_sum(ch, i))
        r_j.append(channel_sum(ch, j))
        r_ij.append(pair_channel_sum(ch, i, j))
    return np.array(r_i), np.array(r_j), np.array(r_ij)


def _cij_samples(stacks, k2: int, sigma2: float) -> np.ndarray:
    r_i, r_j, r_ij = stacks
    return k2 * (
        _batched_logdet(r_i, sigma2)
        + _batched_logdet(r_j, sigma2)
        - _batched_logdet(r_ij, sigma2)
    )


def cij_phase2_mc(
    cfg: NetworkConfig, i: int, j: int, sigma2: float, n_samples: int, seed: int
) -> McEstimate:
    """
    K_2 E[log2|s R_{H,i} + I| + log2|s R_{H,j} + I| - log2|s R_{H,(i,j)} + I|]
    with s = sigma^2.
    """
    require_valid(cfg)
    _require_pair(cfg, i, j)
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    stacks = _cij_stacks(cfg, i, j, n_samples, seed)
    return _estimate(_cij_samples(stacks, cfg.k2, sigma2))


def _ckey0_stacks(
    cfg2u: TwoUserModifiedConfig, n_samples: int, seed: int
) -> Tuple[np.ndarray, np.ndarray]:
    net = cfg2u.as_network()
    g21, g12 = [], []
    for k in range(n_samples):
        ch = sample_channels(net, seed, index=k)
        h21 = ch.user_channels[(1, 0)]
        h12 = ch.user_channels[(0, 1)]
        g21.append(h21 @ h21.conj().T)
        g12.append(h12 @ h12.conj().T)
    return np.array(g21), np.array(g12)


def _ckey0_samples(cfg2u: TwoUserModifiedConfig, stacks, sigma2: float) -> np.ndarray:
    g21, g12 = stacks
    return (cfg2u.k_total - cfg2u.n1) * _batched_logdet(g21, sigma2) + (
        cfg2u.k_total - cfg2u.n2
    ) * _batched_logdet(g12, sigma2)


def ckey0_modified_mc(
    cfg2u: TwoUserModifiedConfig, sigma2: float, n_samples: int, seed: int
) -> McEstimate:
    """
    I(X_1; Y_2^(2) | H_{2,1}) + I(X_2; Y_1^(2) | H_{1,2}) for the modified
    two-user scheme.
    """
    require_valid_two_user(cfg2u)
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    stacks = _ckey0_stacks(cfg2u, n_samples, seed)
    return _estimate(_ckey0_samples(cfg2u, stacks, sigma2))


def _gaussian_stack(m: int, n: int, n_samples: int, seed: int) -> np.ndarray:
    grams = []
    for k in range(n_samples):
        h = crandn(substream(seed, "mc", k), (m, n))
        grams.append(h @ h.conj().T)
    return np.array(grams)


def _entropy_samples(m: int, k: int, grams: np.ndarray, sigma2: float) -> np.ndarray:
    # |sigma^2 (I_k kron HH^H) + I_mk| = |sigma^2 HH^H + I_m|^k
    return m * k * LOG2_E_PI + k * _batched_logdet(grams, sigma2)


def _entropy_estimate(
    m: int, n: int, k: int, sigma2: float, n_samples: int, seed: int
) -> McEstimate:
    if min(m, n, k) < 1:
        raise ValueError(f"m, n, k must be positive, got ({m}, {n}, {k})")
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    return _estimate(_entropy_samples(m, k, _gaussian_stack(m, n, n_samples, seed), sigma2))


def entropy_cond_gaussian_mc(
    m: int, n: int, k: int, sigma2: float, n_samples: int, seed: int
) -> float:
    """h(Y|H) in bits for Y = sigma H X + W with H m x n and X n x k Gaussian."""
    return _entropy_estimate(m, n, k, sigma2, n_samples, seed).mean


def _curve(
    grid: SnrGrid, point: Callable[[float], np.ndarray], n_samples: int
) -> CapacityCurve:
    estimates = [_estimate(point(s2)) for s2 in grid.sigma2]
    return CapacityCurve(
        grid=grid,
        values=tuple(e.mean for e in estimates),
        mc_samples=n_samples,
        mc_stderr=tuple(e.stderr for e in estimates),
    )


def phase1_curve(
    cfg: NetworkConfig, ps: PilotSet, i: int, j: int, grid: SnrGrid
) -> CapacityCurve:
    values = tuple(phase1_skc_exact(cfg, ps, i, j, s2) for s2 in grid.sigma2)
    return CapacityCurve(grid=grid, values=values)


def cij_curve(
    cfg: NetworkConfig, i: int, j: int, grid: SnrGrid, n_samples: int, seed: int
) -> CapacityCurve:
    require_valid(cfg)
    _require_pair(cfg, i, j)
    stacks = _cij_stacks(cfg, i, j, n_samples, seed)
    curve = _curve(grid, lambda s2: _cij_samples(stacks, cfg.k2, s2), n_samples)
    log.debug(
        "Computed C_ij curve",
        extra={"antennas": cfg.antennas, "pair": (i, j), "mc_samples": n_samples},
    )
    return curve


def ckey0_curve(
    cfg2u: TwoUserModifiedConfig, grid: SnrGrid, n_samples: int, seed: int
) -> CapacityCurve:
    require_valid_two_user(cfg2u)
    stacks = _ckey0_stacks(cfg2u, n_samples, seed)
    curve = _curve(grid, lambda s2: _ckey0_samples(cfg2u, stacks, s2), n_samples)
    log.debug(
        "Computed C_key,0 curve",
        extra={"n1": cfg2u.n1, "n2": cfg2u.n2, "mc_samples": n_samples},
    )
    return curve


def entropy_curve(
    m: int, n: int, k: int, grid: SnrGrid, n_samples: int, seed: int
) -> CapacityCurve:
    grams = _gaussian_stack(m, n, n_samples, seed)
    return _curve(grid, lambda s2: _entropy_samples(m, k, grams, s2), n_samples)
