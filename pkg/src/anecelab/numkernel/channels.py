from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Tuple

import numpy as np

from anecelab.model import NetworkConfig, require_valid

from .rng import crandn, substream


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """
    One coherence period of channels.

    Attributes
    ----------
    user_channels: mapping (i, j) -> ndarray
        H_{i,j} of shape N_i x N_j for every ordered pair i != j, with
        H_{j,i} the transpose of H_{i,j}.
    eve_channels: tuple of ndarray
        H_{E,i} of shape N_E x N_i, in user order.
    """

    user_channels: Mapping[Tuple[int, int], np.ndarray]
    eve_channels: Tuple[np.ndarray, ...]

    @property
    def m(self) -> int:
        return len(self.eve_channels)

    @property
    def antennas(self) -> Tuple[int, ...]:
        return tuple(h.shape[1] for h in self.eve_channels)

    @property
    def n_eve(self) -> int:
        return self.eve_channels[0].shape[0]

    @property
    def eve_stacked(self) -> np.ndarray:
        """H_E = [H_{E,1}, ..., H_{E,M}], N_E x N_T."""
        return np.hstack(self.eve_channels)

    def row(self, i: int, cols: Iterable[int]) -> np.ndarray:
        """Horizontal stack of H_{i,l} over the given users l."""
        return np.hstack([self.user_channels[(i, l)] for l in cols])

    def received(self, i: int) -> np.ndarray:
        """H_i = [H_{i,l}]_{l != i}, what user i hears from everyone else."""
        return self.row(i, (l for l in range(self.m) if l != i))


def sample_channels(
    cfg: NetworkConfig, seed: int, index: int = 0
) -> ChannelRealization:
    """
    Draw reciprocal user channels and Eve's channels, all CN(0,1).

    index selects an independent realization for the same seed, so Monte
    Carlo sample k always sees the same channels.
    """
    require_valid(cfg)
    rng = substream(seed, "channels", index)

    users: Dict[Tuple[int, int], np.ndarray] = {}
    for i, j in cfg.pairs:
        h = _frozen(crandn(rng, (cfg.antennas[i], cfg.antennas[j])))
        users[(i, j)] = h
        users[(j, i)] = _frozen(h.T)

    eve = tuple(_frozen(crandn(rng, (cfg.n_eve, n))) for n in cfg.antennas)
    return ChannelRealization(user_channels=users, eve_channels=eve)
