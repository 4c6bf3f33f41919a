"""
Received signals for one coherence period.

Nodes are ideal full duplex: a node never hears its own transmission, and
propagation delays are ignored. Channels are fixed per realization while
noise and phase-2 symbols are drawn afresh on every call.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from anecelab.model import (
    EVE_NOISE_VAR,
    InvalidConfigError,
    NetworkConfig,
    ShapeMismatchError,
    TwoUserModifiedConfig,
    require_valid_two_user,
)
from anecelab.pilots import ModifiedPilotPair, PilotSet

from .channels import ChannelRealization
from .rng import crandn, substream


@dataclass(frozen=True, eq=False)
class Phase1Signals:
    user_rx: Tuple[np.ndarray, ...]
    eve_rx: np.ndarray


@dataclass(frozen=True, eq=False)
class Phase2Signals:
    symbols: Tuple[np.ndarray, ...]
    user_rx: Tuple[np.ndarray, ...]
    eve_rx: np.ndarray


@dataclass(frozen=True, eq=False)
class ModifiedSessionSignals:
    """
    Attributes
    ----------
    y1_p1, y2_p1: ndarray
        Pilot-segment receptions, N_1 x N_2 and N_2 x N_1.
    y1_p2, y2_p2: ndarray
        Symbol-segment receptions, N_1 x (K - N_2) and N_2 x (K - N_1).
    eve_rx_full: ndarray
        N_E x K, everything Eve hears over the period.
    x1, x2: ndarray
        The symbols sent, N_1 x (K - N_1) and N_2 x (K - N_2).
    """

    y1_p1: np.ndarray
    y2_p1: np.ndarray
    y1_p2: np.ndarray
    y2_p2: np.ndarray
    eve_rx_full: np.ndarray
    x1: np.ndarray
    x2: np.ndarray


def _noise(rng: np.random.Generator, shape, scale: float) -> np.ndarray:
    return scale * crandn(rng, shape)


def _check_antennas(ch: ChannelRealization, antennas: Tuple[int, ...]) -> None:
    if ch.antennas != tuple(antennas):
        raise ShapeMismatchError(
            f"channels are for antennas {ch.antennas}, signals need {tuple(antennas)}"
        )


def synth_phase1(
    ch: ChannelRealization,
    ps: PilotSet,
    sigma: float,
    seed: int,
    noise_scale: float = 1.0,
) -> Phase1Signals:
    """Y_i = sigma H_i P_(i) + W_i and Y_E = sigma H_E P + W_E."""
    _check_antennas(ch, ps.antennas)
    rng = substream(seed, "noise", 1)

    user_rx = []
    for i, n_i in enumerate(ps.antennas):
        clean = sum(
            ch.user_channels[(i, l)] @ ps.blocks[l] for l in range(ch.m) if l != i
        )
        user_rx.append(sigma * clean + _noise(rng, (n_i, ps.k1), noise_scale))

    eve_scale = noise_scale * np.sqrt(EVE_NOISE_VAR)
    eve_rx = sigma * ch.eve_stacked @ ps.stacked + _noise(
        rng, (ch.n_eve, ps.k1), eve_scale
    )
    return Phase1Signals(user_rx=tuple(user_rx), eve_rx=eve_rx)


def synth_phase2(
    ch: ChannelRealization,
    cfg: NetworkConfig,
    sigma: float,
    seed: int,
    noise_scale: float = 1.0,
) -> Phase2Signals:
    """Y_i = sigma sum_{j != i} H_{i,j} X_j + W_i and Y_E = sigma H_E X + W_E."""
    if cfg.k2 < 1:
        raise InvalidConfigError(["K_2 < 1"])
    _check_antennas(ch, cfg.antennas)

    sym_rng = substream(seed, "symbols", 2)
    noise_rng = substream(seed, "noise", 2)
    symbols = tuple(crandn(sym_rng, (n, cfg.k2)) for n in cfg.antennas)

    user_rx = []
    for i, n_i in enumerate(cfg.antennas):
        clean = sum(ch.user_channels[(i, j)] @ symbols[j] for j in cfg.others(i))
        user_rx.append(sigma * clean + _noise(noise_rng, (n_i, cfg.k2), noise_scale))

    eve_scale = noise_scale * np.sqrt(cfg.eve_noise_var)
    eve_rx = sigma * ch.eve_stacked @ np.vstack(symbols) + _noise(
        noise_rng, (cfg.n_eve, cfg.k2), eve_scale
    )
    return Phase2Signals(symbols=symbols, user_rx=tuple(user_rx), eve_rx=eve_rx)


def synth_modified_session(
    cfg2u: TwoUserModifiedConfig,
    pp: ModifiedPilotPair,
    ch: ChannelRealization,
    sigma: float,
    seed: int,
    noise_scale: float = 1.0,
) -> ModifiedSessionSignals:
    """
    Node 1 sends [P_1, X_1] and node 2 sends [P_2, X_2] over the same K
    slots. Each node hears the other's pilot first and its symbols after,
    so node 1's segments split at slot N_2 and node 2's at slot N_1.
    """
    require_valid_two_user(cfg2u)
    _check_antennas(ch, (cfg2u.n1, cfg2u.n2))
    if pp.p1.shape != (cfg2u.n1, cfg2u.n1) or pp.p2.shape != (cfg2u.n2, cfg2u.n2):
        raise ShapeMismatchError(
            f"square pilots {pp.p1.shape}, {pp.p2.shape} do not match "
            f"N_1={cfg2u.n1}, N_2={cfg2u.n2}"
        )

    n1, n2, k = cfg2u.n1, cfg2u.n2, cfg2u.k_total
    sym_rng = substream(seed, "symbols", 3)
    noise_rng = substream(seed, "noise", 3)
    x1 = crandn(sym_rng, (n1, k - n1))
    x2 = crandn(sym_rng, (n2, k - n2))

    h12 = ch.user_channels[(0, 1)]
    h21 = ch.user_channels[(1, 0)]

    y1_p1 = sigma * h12 @ pp.p2 + _noise(noise_rng, (n1, n2), noise_scale)
    y2_p1 = sigma * h21 @ pp.p1 + _noise(noise_rng, (n2, n1), noise_scale)
    y1_p2 = sigma * h12 @ x2 + _noise(noise_rng, (n1, k - n2), noise_scale)
    y2_p2 = sigma * h21 @ x1 + _noise(noise_rng, (n2, k - n1), noise_scale)

    tx = np.vstack([np.hstack([pp.p1, x1]), np.hstack([pp.p2, x2])])
    eve_scale = noise_scale * np.sqrt(EVE_NOISE_VAR)
    eve_rx_full = sigma * ch.eve_stacked @ tx + _noise(
        noise_rng, (cfg2u.n_eve, k), eve_scale
    )

    return ModifiedSessionSignals(
        y1_p1=y1_p1,
        y2_p1=y2_p1,
        y1_p2=y1_p2,
        y2_p2=y2_p2,
        eve_rx_full=eve_rx_full,
        x1=x1,
        x2=x2,
    )


def eve_phase1_ambiguity(
    ch: ChannelRealization, ps: PilotSet, q_perp: np.ndarray, seed: int
) -> float:
    """
    Relative change of Eve's noiseless phase-1 reception when her channel
    moves along the ambiguity subspace, H_E -> H_E + T Q_{P,perp}^H. Zero up
    to rounding: phase 1 tells Eve nothing about H_{E,P,perp}.
    """
    rng = substream(seed, "ambiguity")
    delta = crandn(rng, (ch.n_eve, q_perp.shape[1])) @ q_perp.conj().T
    if not delta.size:
        return 0.0

    cuts = np.cumsum(ch.antennas)[:-1]
    moved = ChannelRealization(
        user_channels=ch.user_channels,
        eve_channels=tuple(np.split(ch.eve_stacked + delta, cuts, axis=1)),
    )

    base = synth_phase1(ch, ps, 1.0, seed, noise_scale=0.0).eve_rx
    shifted = synth_phase1(moved, ps, 1.0, seed, noise_scale=0.0).eve_rx
    return float(np.linalg.norm(shifted - base) / np.linalg.norm(delta))
