from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from anecelab.model import DofReport, SnrGrid
from anecelab.verify.compare import ComparisonTable
from anecelab.verify.runner import CheckTask


class SweepAxisError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PilotAudit:
    """
    Pilot matrices of a scheme plus the rank audit lines printed with them.

    Attributes
    ----------
    matrices: dict of str -> ndarray
        Named matrices in file order, e.g. {"P": ...} or {"P1": ..., "P2": ...}.
    lines: list of str
        One "rank(...)=r OK" or "rank(...)=r FAIL (need s)" line per condition.
    """

    matrices: Dict[str, np.ndarray]
    lines: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(line.endswith("OK") for line in self.lines)


def audit_line(label: str, rank: int, expected: int) -> str:
    if rank == expected:
        return f"rank({label})={rank} OK"
    return f"rank({label})={rank} FAIL (need {expected})"


class AneceScheme(ABC):
    """
    An abstract interface over one ANECE variant and its network.
    """

    name: str
    sweep_axes: Tuple[str, ...]

    @abstractmethod
    def formula(self) -> DofReport:
        """
        Every closed-form value that applies to this scheme.
        """
        pass

    @abstractmethod
    def with_axis(self, axis: str, value: int) -> "AneceScheme":
        """
        The same scheme with one sweep parameter replaced.
        """
        pass

    @abstractmethod
    def check_tasks(
        self, grid: SnrGrid, mc_samples: int, seed: int, rank_draws: int
    ) -> List[CheckTask]:
        """
        Independent verification jobs; each returns a list of CheckResult.
        """
        pass

    @abstractmethod
    def pilots(self, seed: int) -> PilotAudit:
        pass

    @abstractmethod
    def compare(self) -> ComparisonTable:
        pass

    def sweep(self, axis: str, values: Sequence[int]) -> List[Dict[str, int]]:
        """One row per axis value: the axis value followed by formula()."""
        if axis not in self.sweep_axes:
            raise SweepAxisError(
                f"axis {axis!r} does not apply to {self.name}; "
                f"choose one of {', '.join(self.sweep_axes)}"
            )
        rows = []
        for value in values:
            report = self.with_axis(axis, value).formula()
            rows.append({axis: value, **report.entries})
        return rows
