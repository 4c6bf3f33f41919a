import functools
from typing import List, Tuple

from anecelab.dofcalc import DofScenario, Scheme, all_user_report
from anecelab.model import DofReport, NetworkConfig, SnrGrid, require_valid
from anecelab.numkernel.linalg import numerical_rank
from anecelab.pilots import build_pilots
from anecelab.verify.compare import ComparisonTable, compare_schemes
from anecelab.verify.runner import CheckTask
from anecelab.verify.suites import (
    cij_slope_checks,
    eig_growth_suite,
    entropy_slope_checks,
    identity_control,
    identity_suite,
    phase1_slope_checks,
    rank_oracle_suite,
)

from .abc import AneceScheme, PilotAudit, SweepAxisError, audit_line


def symmetric_resize(cfg: NetworkConfig, m: int) -> NetworkConfig:
    if len(set(cfg.antennas)) != 1:
        raise SweepAxisError(
            f"sweeping m needs equal antenna counts, got {cfg.antennas}"
        )
    return cfg.with_updates(antennas=(cfg.antennas[0],) * m)


class AllUserScheme(AneceScheme):
    """
    All M users send their pilots concurrently, then random symbols.

    Attributes
    ----------
    cfg: NetworkConfig
        The network.
    pair: tuple of int
        The ordered (i, j) pair whose key is reported, zero-based.
    """

    name = Scheme.ALL_USER.value
    sweep_axes = ("n_eve", "k2", "m")

    def __init__(self, cfg: NetworkConfig, pair: Tuple[int, int] = (0, 1)):
        self.cfg = require_valid(cfg)
        self.pair = pair
        self.scenario = DofScenario(cfg, *pair)

    def formula(self) -> DofReport:
        return DofReport(all_user_report(self.scenario))

    def with_axis(self, axis: str, value: int) -> "AllUserScheme":
        if axis == "n_eve":
            return AllUserScheme(self.cfg.with_updates(n_eve=value), self.pair)
        if axis == "k2":
            return AllUserScheme(self.cfg.with_updates(k2=value), self.pair)
        if axis == "m":
            return AllUserScheme(symmetric_resize(self.cfg, value), self.pair)
        raise SweepAxisError(f"axis {axis!r} does not apply to {self.name}")

    def check_tasks(
        self, grid: SnrGrid, mc_samples: int, seed: int, rank_draws: int
    ) -> List[CheckTask]:
        cfg, (i, j) = self.cfg, self.pair
        ps = build_pilots(cfg, seed)
        tasks = [
            functools.partial(phase1_slope_checks, cfg, ps, self.pair, grid),
            functools.partial(eig_growth_suite, cfg, ps, seed),
            functools.partial(rank_oracle_suite, cfg, seed, rank_draws),
            identity_suite,
            identity_control,
        ]
        if cfg.k2 >= 1:
            tasks += [
                functools.partial(cij_slope_checks, cfg, self.pair, grid, mc_samples, seed),
                functools.partial(entropy_slope_checks, cfg, i, grid, mc_samples, seed),
            ]
        return tasks

    def pilots(self, seed: int) -> PilotAudit:
        cfg = self.cfg
        ps = build_pilots(cfg, seed)
        lines = [audit_line("P", numerical_rank(ps.stacked), cfg.min_k1)]
        for i, block in enumerate(ps.blocks):
            n_i = cfg.antennas[i]
            lines.append(audit_line(f"P_{i + 1}", numerical_rank(block), n_i))
            lines.append(
                audit_line(f"P_({i + 1})", numerical_rank(ps.without(i)), cfg.n_total - n_i)
            )
        return PilotAudit(matrices={"P": ps.stacked}, lines=lines)

    def compare(self) -> ComparisonTable:
        return compare_schemes(self.cfg, self.cfg.k2, self.pair)
