from dataclasses import dataclass
from typing import Tuple

from anecelab.dofcalc import (
    DofScenario,
    Scheme,
    dof_modified_two_user,
    dof_pairwise,
    dof_phase1,
    dof_phase2_lower_plus,
    pos,
    sessions,
)
from anecelab.model import NetworkConfig, TwoUserModifiedConfig, require_valid


class SessionBudgetError(ValueError):
    pass


@dataclass(frozen=True)
class ComparisonRow:
    scheme: str
    phase1_dof: int
    phase2_dof: int
    phase1_slots: int
    phase2_slots: int

    @property
    def total_dof(self) -> int:
        return self.phase1_dof + pos(self.phase2_dof)

    def as_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "phase1_dof": self.phase1_dof,
            "phase2_dof": self.phase2_dof,
            "total_dof": self.total_dof,
            "phase1_slots": self.phase1_slots,
            "phase2_slots": self.phase2_slots,
        }


COMPARISON_COLUMNS = (
    "scheme",
    "phase1_dof",
    "phase2_dof",
    "total_dof",
    "phase1_slots",
    "phase2_slots",
)


@dataclass(frozen=True)
class ComparisonTable:
    rows: Tuple[ComparisonRow, ...]

    def row(self, scheme: str) -> ComparisonRow:
        for row in self.rows:
            if row.scheme == scheme:
                return row
        raise KeyError(scheme)

    def schemes(self) -> Tuple[str, ...]:
        return tuple(row.scheme for row in self.rows)


def compare_schemes(
    cfg: NetworkConfig, k2: int, pair: Tuple[int, int] = (0, 1)
) -> ComparisonTable:
    """
    DoF and slot accounting of the ANECE variants under one phase-2 budget.

    The all-user row runs every user's pilots at once over K_1 slots. The
    pair-wise row (M >= 3) runs P_0 two-user sessions of max_i N_i pilot
    slots each and splits K_2 evenly across them. For M = 2 a modified
    two-user row with K = N_2 + K_2 is added.
    """
    cfg = require_valid(cfg.with_updates(k2=k2))
    i, j = pair
    s = DofScenario(cfg, i, j)

    rows = [
        ComparisonRow(
            scheme=Scheme.ALL_USER.value,
            phase1_dof=dof_phase1(s.n_i, s.n_j),
            phase2_dof=dof_phase2_lower_plus(s),
            phase1_slots=cfg.k1,
            phase2_slots=k2,
        )
    ]

    if cfg.m >= 3:
        p0 = sessions(cfg.m)
        if k2 % p0:
            raise SessionBudgetError(
                f"K_2 = {k2} cannot be split evenly over P_0 = {p0} sessions"
            )
        bounds = dof_pairwise(s.n_i, s.n_j, cfg.n_eve, k2 // p0)
        rows.append(
            ComparisonRow(
                scheme=Scheme.PAIRWISE.value,
                phase1_dof=dof_phase1(s.n_i, s.n_j),
                phase2_dof=bounds.upper,
                phase1_slots=p0 * max(cfg.antennas),
                phase2_slots=k2,
            )
        )

    if cfg.m == 2:
        n1, n2 = sorted(cfg.antennas)
        cfg2u = TwoUserModifiedConfig(n1=n1, n2=n2, k_total=n2 + k2, n_eve=cfg.n_eve)
        rows.append(
            ComparisonRow(
                scheme=Scheme.MODIFIED_TWO_USER.value,
                phase1_dof=dof_phase1(n1, n2),
                phase2_dof=dof_modified_two_user(cfg2u).lower_12,
                phase1_slots=n2,
                phase2_slots=k2,
            )
        )

    return ComparisonTable(rows=tuple(rows))
