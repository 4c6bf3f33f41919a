import functools
from typing import List

from anecelab.dofcalc import Scheme, modified_report
from anecelab.model import (
    CheckResult,
    DofReport,
    SnrGrid,
    TwoUserModifiedConfig,
    require_valid_two_user,
)
from anecelab.numkernel.linalg import numerical_rank
from anecelab.pilots import build_square_pilots
from anecelab.verify.compare import ComparisonTable, compare_schemes
from anecelab.verify.runner import CheckTask
from anecelab.verify.suites import (
    ckey0_slope_checks,
    identity_control,
    identity_suite,
    rank_oracle_suite,
)

from .abc import AneceScheme, PilotAudit, SweepAxisError, audit_line


def square_pilot_checks(cfg2u: TwoUserModifiedConfig, seed: int) -> List[CheckResult]:
    pp = build_square_pilots(cfg2u, seed)
    return [
        CheckResult("rank.square_pilots[1]", numerical_rank(pp.p1), cfg2u.n1, 0),
        CheckResult("rank.square_pilots[2]", numerical_rank(pp.p2), cfg2u.n2, 0),
    ]


class ModifiedTwoUserScheme(AneceScheme):
    """
    Two users with nonsingular square pilots P_1 (N_1 x N_1) and P_2
    (N_2 x N_2) sent at the start of the same K slots, symbols after.
    """

    name = Scheme.MODIFIED_TWO_USER.value
    sweep_axes = ("n_eve", "k", "k2")

    def __init__(self, cfg2u: TwoUserModifiedConfig):
        self.cfg2u = require_valid_two_user(cfg2u)

    def _replace(self, **changes) -> "ModifiedTwoUserScheme":
        fields = {
            "n1": self.cfg2u.n1,
            "n2": self.cfg2u.n2,
            "k_total": self.cfg2u.k_total,
            "n_eve": self.cfg2u.n_eve,
        }
        fields.update(changes)
        return ModifiedTwoUserScheme(TwoUserModifiedConfig(**fields))

    def formula(self) -> DofReport:
        return DofReport(modified_report(self.cfg2u))

    def with_axis(self, axis: str, value: int) -> "ModifiedTwoUserScheme":
        if axis == "n_eve":
            return self._replace(n_eve=value)
        if axis == "k":
            return self._replace(k_total=value)
        if axis == "k2":
            # phase-2 slots of the matching original scheme, K - N_2
            return self._replace(k_total=self.cfg2u.n2 + value)
        raise SweepAxisError(f"axis {axis!r} does not apply to {self.name}")

    def check_tasks(
        self, grid: SnrGrid, mc_samples: int, seed: int, rank_draws: int
    ) -> List[CheckTask]:
        return [
            functools.partial(ckey0_slope_checks, self.cfg2u, grid, mc_samples, seed),
            functools.partial(square_pilot_checks, self.cfg2u, seed),
            functools.partial(rank_oracle_suite, self.cfg2u.as_network(), seed, rank_draws),
            identity_suite,
            identity_control,
        ]

    def pilots(self, seed: int) -> PilotAudit:
        pp = build_square_pilots(self.cfg2u, seed)
        return PilotAudit(
            matrices={"P1": pp.p1, "P2": pp.p2},
            lines=[
                audit_line("P1", numerical_rank(pp.p1), self.cfg2u.n1),
                audit_line("P2", numerical_rank(pp.p2), self.cfg2u.n2),
            ],
        )

    def compare(self) -> ComparisonTable:
        return compare_schemes(
            self.cfg2u.as_network(), self.cfg2u.k_total - self.cfg2u.n2
        )
