from .abc import AneceScheme, PilotAudit, SweepAxisError
from .all_user import AllUserScheme
from .modified import ModifiedTwoUserScheme
from .pairwise import PairwiseScheme

__all__ = [
    "AllUserScheme",
    "AneceScheme",
    "ModifiedTwoUserScheme",
    "PairwiseScheme",
    "PilotAudit",
    "SweepAxisError",
]
