import functools
from typing import List, Tuple

from anecelab.dofcalc import Scheme, pairwise_report, sessions
from anecelab.model import DofReport, NetworkConfig, SnrGrid, require_valid
from anecelab.numkernel.linalg import numerical_rank
from anecelab.pilots import build_pairwise_matrix, build_pilots, build_session_blocks
from anecelab.verify.compare import ComparisonTable, SessionBudgetError, compare_schemes
from anecelab.verify.runner import CheckTask
from anecelab.verify.suites import (
    cij_slope_checks,
    identity_control,
    identity_suite,
    phase1_slope_checks,
    rank_oracle_suite,
)

from .abc import AneceScheme, PilotAudit, SweepAxisError, audit_line
from .all_user import symmetric_resize

SESSION_PREFIX = "session."


class PairwiseScheme(AneceScheme):
    """
    The M(M-1)/2 user pairs run two-user ANECE one after another, each
    session getting K_2 / P_0 phase-2 slots.
    """

    name = Scheme.PAIRWISE.value
    sweep_axes = ("n_eve", "k2", "m")

    def __init__(self, cfg: NetworkConfig, pair: Tuple[int, int] = (0, 1)):
        self.cfg = require_valid(cfg)
        self.pair = pair
        p0 = sessions(cfg.m)
        if cfg.k2 % p0:
            raise SessionBudgetError(
                f"K_2 = {cfg.k2} cannot be split evenly over P_0 = {p0} sessions"
            )
        self.k2_session = cfg.k2 // p0

    def session_network(self) -> NetworkConfig:
        """The two-user network of the reported pair's session."""
        i, j = self.pair
        return NetworkConfig(
            antennas=(self.cfg.antennas[i], self.cfg.antennas[j]),
            n_eve=self.cfg.n_eve,
            k2=self.k2_session,
        )

    def formula(self) -> DofReport:
        return DofReport(pairwise_report(self.cfg, self.pair))

    def with_axis(self, axis: str, value: int) -> "PairwiseScheme":
        if axis == "n_eve":
            return PairwiseScheme(self.cfg.with_updates(n_eve=value), self.pair)
        if axis == "k2":
            return PairwiseScheme(self.cfg.with_updates(k2=value), self.pair)
        if axis == "m":
            # keep the per-session budget fixed as the number of sessions changes
            cfg = symmetric_resize(self.cfg, value)
            return PairwiseScheme(
                cfg.with_updates(k2=self.k2_session * sessions(value)), self.pair
            )
        raise SweepAxisError(f"axis {axis!r} does not apply to {self.name}")

    def check_tasks(
        self, grid: SnrGrid, mc_samples: int, seed: int, rank_draws: int
    ) -> List[CheckTask]:
        session = self.session_network()
        ps = build_pilots(session, seed)
        tasks = [
            functools.partial(phase1_slope_checks, session, ps, (0, 1), grid, SESSION_PREFIX),
            functools.partial(rank_oracle_suite, self.cfg, seed, rank_draws),
            identity_suite,
            identity_control,
        ]
        if self.k2_session >= 1:
            tasks.append(
                functools.partial(
                    cij_slope_checks, session, (0, 1), grid, mc_samples, seed, SESSION_PREFIX
                )
            )
        return tasks

    def pilots(self, seed: int) -> PilotAudit:
        blocks = build_session_blocks(self.cfg, seed)
        pairwise = build_pairwise_matrix(self.cfg, blocks)
        lines = [
            audit_line(f"P_{i + 1}", numerical_rank(block), self.cfg.antennas[i])
            for i, block in enumerate(blocks)
        ]
        lines.append(
            audit_line("P_pair", numerical_rank(pairwise.matrix), self.cfg.n_total)
        )
        return PilotAudit(matrices={"P_pair": pairwise.matrix}, lines=lines)

    def compare(self) -> ComparisonTable:
        return compare_schemes(self.cfg, self.cfg.k2, self.pair)
