from .channels import ChannelRealization, sample_channels
from .linalg import (
    NotPositiveDefiniteError,
    eig_growth_count,
    logdet_hpd,
    numerical_rank,
)
from .rng import crandn, substream

__all__ = [
    "ChannelRealization",
    "NotPositiveDefiniteError",
    "crandn",
    "eig_growth_count",
    "logdet_hpd",
    "numerical_rank",
    "sample_channels",
    "substream",
]
