"""
Covariance assembly for the phase-1 and phase-2 receptions.

Vectorization is column-major throughout: vec(A X B) = (B^T kron A) vec(X).
"""

from typing import Dict, List, Tuple

import numpy as np
import scipy.linalg

from anecelab.model import NetworkConfig
from anecelab.pilots import PilotSet

from .channels import ChannelRealization


def pilot_gram(ps: PilotSet, i: int) -> np.ndarray:
    """sum_{l != i} P_l^T conj(P_l), the K_1 x K_1 pilot energy user i hears."""
    others = ps.without(i)
    return others.T @ others.conj()


def phase1_rx_cov(ps: PilotSet, i: int, sigma2: float) -> np.ndarray:
    """R_{Y,i} = (sigma^2 G_i + I_{K_1}) kron I_{N_i}, covariance of vec(Y_i)."""
    gram = sigma2 * pilot_gram(ps, i) + np.eye(ps.k1)
    return np.kron(gram, np.eye(ps.antennas[i]))


def phase1_rx_cov_transposed(ps: PilotSet, j: int, sigma2: float) -> np.ndarray:
    """R'_{Y,j} = I_{N_j} kron (sigma^2 G_j + I_{K_1}), covariance of vec(Y_j^T)."""
    gram = sigma2 * pilot_gram(ps, j) + np.eye(ps.k1)
    return np.kron(np.eye(ps.antennas[j]), gram)


def phase1_joint_cov(ps: PilotSet, i: int, j: int, sigma2: float) -> np.ndarray:
    """
    Covariance of [vec(Y_i); vec(Y_j^T)]. The two observations share only
    the reciprocal channel H_{i,j}, which gives the cross block
    sigma^2 (P_j^T kron conj(P_i)).
    """
    cross = sigma2 * np.kron(ps.blocks[j].T, ps.blocks[i].conj())
    return np.block(
        [
            [phase1_rx_cov(ps, i, sigma2), cross],
            [cross.conj().T, phase1_rx_cov_transposed(ps, j, sigma2)],
        ]
    )


def _entry_ids(cfg: NetworkConfig, i: int, j: int) -> Tuple[List[int], List[int]]:
    """
    Label each channel entry in h_i = vec(H_i) and h_j = stack of
    vec(H_{l,j}), l != j, so that the two reciprocal copies of an entry of
    H_{i,j} share a label.
    """
    labels: Dict[Tuple[int, int, int, int], int] = {}

    def label(a: int, b: int, r: int, c: int) -> int:
        # H_{b,a}[c, r] and H_{a,b}[r, c] are the same physical coefficient
        key = (a, b, r, c) if a < b else (b, a, c, r)
        return labels.setdefault(key, len(labels))

    ids_i = [
        label(i, l, r, c)
        for l in cfg.others(i)
        for c in range(cfg.antennas[l])
        for r in range(cfg.antennas[i])
    ]
    ids_j = [
        label(l, j, r, c)
        for l in cfg.others(j)
        for c in range(cfg.antennas[j])
        for r in range(cfg.antennas[l])
    ]
    return ids_i, ids_j


def joint_channel_cov(cfg: NetworkConfig, i: int, j: int) -> np.ndarray:
    """R_{h,i,j}: 0/1 covariance of [h_i; h_j] for i.i.d. unit channel entries."""
    ids_i, ids_j = _entry_ids(cfg, i, j)
    ids = np.asarray(ids_i + ids_j)
    return (ids[:, None] == ids[None, :]).astype(float)


def phase1_joint_coefficient(
    cfg: NetworkConfig, ps: PilotSet, i: int, j: int
) -> np.ndarray:
    """
    The sigma^2 coefficient of the joint phase-1 covariance, built from the
    channel covariance as A R_{h,i,j} A^H.
    """
    a_i = np.kron(ps.without(i).T, np.eye(cfg.antennas[i]))
    a_j = np.hstack(
        [np.kron(np.eye(cfg.antennas[j]), ps.blocks[l].T) for l in cfg.others(j)]
    )
    a = scipy.linalg.block_diag(a_i, a_j)
    return a @ joint_channel_cov(cfg, i, j) @ a.conj().T


def channel_sum(ch: ChannelRealization, i: int) -> np.ndarray:
    """R_{H,i} = sum_{l != i} H_{i,l} H_{i,l}^H."""
    h = ch.received(i)
    return h @ h.conj().T


def pair_channel_sum(ch: ChannelRealization, i: int, j: int) -> np.ndarray:
    """
    R_{H,(i,j)} = sum_{l not in {i,j}} H_{(i,j),l} H_{(i,j),l}^H with
    H_{(i,j),l} = [H_{i,l}; H_{j,l}]. Zero when no third user exists.
    """
    n = ch.antennas[i] + ch.antennas[j]
    total = np.zeros((n, n), dtype=complex)
    for l in range(ch.m):
        if l in (i, j):
            continue
        h = np.vstack([ch.user_channels[(i, l)], ch.user_channels[(j, l)]])
        total += h @ h.conj().T
    return total
