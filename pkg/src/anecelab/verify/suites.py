"""
Check suites that tie the numeric kernels to the closed forms.

Matrix oracles (rank and eigenvalue growth) and slope fits produce
CheckResult rows with a tolerance; identity families are exact integer
checks that report the number of violating grid points, target 0.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Optional, Tuple

import numpy as np

from anecelab.capacity import cij_curve, ckey0_curve, entropy_curve, phase1_curve
from anecelab.dofcalc import (
    DofScenario,
    closed_form_term,
    dof_cij,
    dof_entropy_terms,
    dof_gap,
    dof_gap_symmetric,
    dof_leakage,
    dof_modified_terms,
    dof_modified_two_user,
    dof_pairwise,
    dof_phase1,
    dof_phase2_lower,
    dof_phase2_lower_plus,
    dof_phase2_symmetric_large_eve,
    dof_phase2_upper,
    dof_two_user_original,
    freedom_count_oracle,
    large_m_threshold,
    modified_branch,
    pos,
    two_user_branch,
)
from anecelab.model import (
    CheckResult,
    NetworkConfig,
    SnrGrid,
    TwoUserModifiedConfig,
    require_valid,
)
from anecelab.numkernel.channels import sample_channels
from anecelab.numkernel.covariance import (
    channel_sum,
    joint_channel_cov,
    phase1_joint_coefficient,
    phase1_joint_cov,
    phase1_rx_cov,
)
from anecelab.numkernel.freedom import jacobian_freedom_count
from anecelab.numkernel.linalg import DEFAULT_POWER_RATIO, eig_growth_count, numerical_rank
from anecelab.numkernel.rng import crandn, substream
from anecelab.numkernel.signals import eve_phase1_ambiguity
from anecelab.pilots import (
    PilotSet,
    build_pairwise_matrix,
    build_pilots,
    build_session_blocks,
    qr_split,
)

from .compare import compare_schemes
from .fit import verify_slope

log = logging.getLogger(__name__)


DEFAULT_RANK_DRAWS = 100
DEFAULT_EIG_SIGMA2 = 2.0**12
KNOWN_RANK_CASES = 50
KNOWN_RANK_SIGMA2 = 2.0**16
AMBIGUITY_TOL = 1e-9
CONTROL_PREFIX = "negctl."


def _tag(*users: int) -> str:
    return "[" + ",".join(str(u + 1) for u in users) + "]"


def _draw_seed(seed: int, draw: int) -> int:
    return int(substream(seed, "draws", draw).integers(2**31))


# -----------------------------------
# Rank oracles
# -----------------------------------
def rank_oracle_suite(
    cfg: NetworkConfig, seed: int, n_draws: int = DEFAULT_RANK_DRAWS
) -> List[CheckResult]:
    """
    Probability-one rank statements, each checked on n_draws independent
    draws of pilots and channels. A check reports how many draws passed.
    """
    require_valid(cfg)
    passes: Dict[str, int] = {}

    def tally(name: str, ok: bool) -> None:
        passes[name] = passes.get(name, 0) + int(ok)

    deficiency = {}
    for i, j in cfg.pairs:
        r_h = joint_channel_cov(cfg, i, j)
        deficiency[(i, j)] = (r_h.shape[0] - numerical_rank(r_h), numerical_rank(r_h))

    for draw in range(n_draws):
        draw_seed = _draw_seed(seed, draw)
        ps = build_pilots(cfg, draw_seed)
        ch = sample_channels(cfg, seed, index=draw)

        for (i, j), (_, rank_h) in deficiency.items():
            coefficient = phase1_joint_coefficient(cfg, ps, i, j)
            tally(f"rank.joint_pilot_coefficient{_tag(i, j)}", numerical_rank(coefficient) == rank_h)

        for i in range(cfg.m):
            n_i = cfg.antennas[i]
            tally(
                f"rank.channel_sum{_tag(i)}",
                numerical_rank(channel_sum(ch, i)) == min(n_i, cfg.n_total - n_i),
            )

        for a, b in cfg.pairs:
            for i, j in ((a, b), (b, a)):
                stacked = np.vstack([ch.user_channels[(i, j)], ch.eve_channels[j]])
                expected = min(cfg.n_eve + cfg.antennas[i], cfg.antennas[j])
                tally(f"rank.stacked_eve{_tag(i, j)}", numerical_rank(stacked) == expected)

        if cfg.m >= 3:
            pairwise = build_pairwise_matrix(cfg, build_session_blocks(cfg, draw_seed))
            tally("rank.pairwise_pilots", numerical_rank(pairwise.matrix) == cfg.n_total)

        split = qr_split(ps)
        tally("rank.eve_resolved_span", numerical_rank(split.r_p) == cfg.min_k1)
        ambiguity = eve_phase1_ambiguity(ch, ps, split.q_perp, draw_seed)
        tally("rank.eve_ambiguity", ambiguity <= AMBIGUITY_TOL)

    results = [
        CheckResult(name=name, measured=count, target=n_draws, tolerance=0)
        for name, count in passes.items()
    ]
    for (i, j), (missing, _) in deficiency.items():
        results.append(
            CheckResult(
                name=f"rank.channel_cov_deficiency{_tag(i, j)}",
                measured=missing,
                target=cfg.antennas[i] * cfg.antennas[j],
                tolerance=0,
            )
        )

    results.extend(freedom_checks(cfg, seed))
    log.info(
        "Finished rank oracle suite",
        extra={"antennas": cfg.antennas, "draws": n_draws, "checks": len(results)},
    )
    return results


def freedom_checks(cfg: NetworkConfig, seed: int) -> List[CheckResult]:
    """Jacobian-rank freedom counts against the closed-form entropy DoFs."""
    results = []
    s = DofScenario(cfg, 0, 1)
    results.append(
        CheckResult(
            name="freedom.ye_given_hep",
            measured=jacobian_freedom_count("ye_given_hep", cfg, 0, seed),
            target=dof_entropy_terms(s).h_ye_given_hep,
            tolerance=0,
        )
    )
    for i in range(cfg.m):
        s = DofScenario(cfg, i, cfg.others(i)[0])
        results.append(
            CheckResult(
                name=f"freedom.joint_i_e{_tag(i)}",
                measured=jacobian_freedom_count("joint_i_e", cfg, i, seed),
                target=dof_entropy_terms(s).h_joint_i_e,
                tolerance=0,
            )
        )
    return results


# -----------------------------------
# Eigenvalue growth
# -----------------------------------
def eig_growth_suite(
    cfg: NetworkConfig,
    ps: PilotSet,
    seed: int,
    sigma2: float = DEFAULT_EIG_SIGMA2,
    power_ratio: float = DEFAULT_POWER_RATIO,
) -> List[CheckResult]:
    require_valid(cfg)
    hi = sigma2 * power_ratio
    results = []

    for i in range(cfg.m):
        n_i = cfg.antennas[i]
        count = eig_growth_count(
            phase1_rx_cov(ps, i, sigma2), phase1_rx_cov(ps, i, hi), power_ratio
        )
        results.append(
            CheckResult(
                name=f"eig_growth.rx{_tag(i)}",
                measured=count,
                target=n_i * (cfg.n_total - n_i),
                tolerance=0,
            )
        )

    for i, j in cfg.pairs:
        n_i, n_j, n_t = cfg.antennas[i], cfg.antennas[j], cfg.n_total
        count = eig_growth_count(
            phase1_joint_cov(ps, i, j, sigma2), phase1_joint_cov(ps, i, j, hi), power_ratio
        )
        results.append(
            CheckResult(
                name=f"eig_growth.joint{_tag(i, j)}",
                measured=count,
                target=n_i * (n_t - n_i) + n_j * (n_t - n_j) - n_i * n_j,
                tolerance=0,
            )
        )

    results.append(known_rank_growth_check(cfg.n_total, seed, power_ratio=power_ratio))
    return results


def known_rank_growth_check(
    size: int,
    seed: int,
    n_cases: int = KNOWN_RANK_CASES,
    sigma2: float = KNOWN_RANK_SIGMA2,
    power_ratio: float = DEFAULT_POWER_RATIO,
) -> CheckResult:
    """
    eig_growth_count on sigma^2 B B^H + I against rank(B), for n_cases
    draws of B with rank anywhere in 0..size. Reports the mismatch count.
    """
    eye = np.eye(size)
    mismatches = 0
    for case in range(n_cases):
        rng = substream(seed, "eig-growth", case)
        rank = int(rng.integers(0, size + 1))
        b = crandn(rng, (size, rank))
        gram = b @ b.conj().T
        count = eig_growth_count(
            sigma2 * gram + eye, sigma2 * power_ratio * gram + eye, power_ratio
        )
        if count != rank:
            mismatches += 1
            log.warning(
                "Known-rank growth count mismatch",
                extra={"case": case, "rank": rank, "count": count},
            )
    return CheckResult(
        name="eig_growth.known_rank", measured=mismatches, target=0, tolerance=0
    )


# -----------------------------------
# Slopes
# -----------------------------------
def phase1_slope_checks(
    cfg: NetworkConfig,
    ps: PilotSet,
    pair: Tuple[int, int],
    grid: SnrGrid,
    prefix: str = "",
) -> List[CheckResult]:
    i, j = pair
    curve = phase1_curve(cfg, ps, i, j, grid)
    target = dof_phase1(cfg.antennas[i], cfg.antennas[j])
    name = f"{prefix}slope.phase1{_tag(i, j)}"
    return [
        verify_slope(name, curve, target),
        verify_slope(CONTROL_PREFIX + name, curve, target + 1, control=True),
    ]


def cij_slope_checks(
    cfg: NetworkConfig,
    pair: Tuple[int, int],
    grid: SnrGrid,
    n_samples: int,
    seed: int,
    prefix: str = "",
) -> List[CheckResult]:
    i, j = pair
    curve = cij_curve(cfg, i, j, grid, n_samples, seed)
    target = dof_cij(DofScenario(cfg, i, j))
    return [verify_slope(f"{prefix}slope.cij{_tag(i, j)}", curve, target)]


def entropy_slope_checks(
    cfg: NetworkConfig, i: int, grid: SnrGrid, n_samples: int, seed: int
) -> List[CheckResult]:
    """h(Y_i | H_i) as a conditional Gaussian entropy with an (N_T - N_i)-wide channel."""
    n_i = cfg.antennas[i]
    curve = entropy_curve(n_i, cfg.n_total - n_i, cfg.k2, grid, n_samples, seed)
    target = dof_entropy_terms(DofScenario(cfg, i, cfg.others(i)[0])).h_yi_given_hi
    return [verify_slope(f"slope.entropy_yi{_tag(i)}", curve, target)]


def ckey0_slope_checks(
    cfg2u: TwoUserModifiedConfig, grid: SnrGrid, n_samples: int, seed: int
) -> List[CheckResult]:
    curve = ckey0_curve(cfg2u, grid, n_samples, seed)
    target = dof_modified_terms(cfg2u).term1
    return [
        verify_slope("slope.ckey0", curve, target),
        verify_slope(f"{CONTROL_PREFIX}slope.ckey0", curve, target + 1, control=True),
    ]


# -----------------------------------
# Identities
# -----------------------------------
@dataclass(frozen=True)
class IdentityGrid:
    """
    Parameter ranges for the exact identity checks.

    users, antennas, n_eve and k2 span the all-user grid; the two_user_*
    fields span N_1 <= N_2, N_E and K for the two-user schemes.
    """

    users: Tuple[int, ...] = (2, 3, 4, 5)
    antennas: Tuple[int, ...] = (1, 2, 3)
    n_eve: Tuple[int, ...] = tuple(range(13))
    k2: Tuple[int, ...] = tuple(range(9))
    two_user_antennas: Tuple[int, ...] = (1, 2, 3, 4)
    two_user_n_eve: Tuple[int, ...] = tuple(range(11))
    two_user_k_max: int = 10


def _layouts(grid: IdentityGrid) -> Iterator[Tuple[int, ...]]:
    # formulas only see N_i, N_j, N_T and N_min, so sorted layouts suffice
    for m in grid.users:
        yield from itertools.combinations_with_replacement(sorted(grid.antennas), m)


def _ordered_pairs(layout: Tuple[int, ...]) -> List[Tuple[int, int]]:
    seen = set()
    pairs = []
    for i, j in itertools.permutations(range(len(layout)), 2):
        if (layout[i], layout[j]) not in seen:
            seen.add((layout[i], layout[j]))
            pairs.append((i, j))
    return pairs


class _GridCache:
    def __init__(self, grid: IdentityGrid):
        self.grid = grid
        self._scenarios: Optional[List[DofScenario]] = None

    @property
    def scenarios(self) -> List[DofScenario]:
        if self._scenarios is None:
            self._scenarios = [
                DofScenario(NetworkConfig(layout, n_eve, k2), i, j)
                for layout in _layouts(self.grid)
                for n_eve in self.grid.n_eve
                for k2 in self.grid.k2
                for i, j in _ordered_pairs(layout)
            ]
        return self._scenarios

    def symmetric(self) -> Iterator[DofScenario]:
        for s in self.scenarios:
            if len(set(s.cfg.antennas)) == 1:
                yield s

    def two_user_dims(self) -> Iterator[Tuple[int, int]]:
        for n1, n2 in itertools.combinations_with_replacement(
            sorted(self.grid.two_user_antennas), 2
        ):
            yield n1, n2

    def modified(self) -> Iterator[TwoUserModifiedConfig]:
        for n1, n2 in self.two_user_dims():
            for n_eve in self.grid.two_user_n_eve:
                for k in range(n2, self.grid.two_user_k_max + 1):
                    yield TwoUserModifiedConfig(n1, n2, k, n_eve)


def _violations(checks) -> int:
    return sum(not ok for ok in checks)


def _gap_consistency(g: _GridCache) -> int:
    return _violations(
        dof_phase2_upper(s) - dof_phase2_lower(s) == dof_gap(s) for s in g.scenarios
    )


def _lower_decomposition(g: _GridCache) -> int:
    return _violations(
        dof_phase2_lower(s) == dof_cij(s) - dof_leakage(s) for s in g.scenarios
    )


def _freedom_oracle(g: _GridCache) -> int:
    bad = _violations(
        freedom_count_oracle(term, s) == closed_form_term(term, s)
        for s in g.scenarios
        for term in ("ye_given_hep", "joint_i_e", "joint_i_j_e")
    )
    return bad + _violations(
        freedom_count_oracle(term, c) == closed_form_term(term, c)
        for c in g.modified()
        for term in ("modified_term2", "modified_term3", "modified_term4")
    )


def _symmetric_large_eve(g: _GridCache) -> int:
    def holds(s: DofScenario) -> bool:
        m, n = s.cfg.m, s.n_i
        table = dof_phase2_symmetric_large_eve(m, n, s.k2)
        if dof_phase2_lower_plus(s) != table:
            return False
        upper = dof_phase2_upper(s)
        if m == 2:
            return upper == table
        if m == 3:
            return upper == dof_phase2_lower(s) + s.delta_k2 * n
        return upper == 0

    return _violations(
        holds(s) for s in g.symmetric() if s.n_eve >= s.cfg.m * s.n_i
    )


def _symmetric_gap_table(g: _GridCache) -> int:
    return _violations(
        dof_gap(s) == dof_gap_symmetric(s.cfg.m, s.n_i, s.n_eve, s.k2)
        for s in g.symmetric()
    )


def _large_m_zero(g: _GridCache) -> int:
    return _violations(
        dof_phase2_lower_plus(s) == 0 and dof_phase2_upper(s) == 0
        for s in g.symmetric()
        if s.cfg.m >= large_m_threshold(s.n_i, s.n_eve)
    )


def _k2_equals_n(g: _GridCache) -> int:
    def holds(s: DofScenario) -> bool:
        n = s.n_i
        expected = 2 * n * n if s.cfg.m == 2 else n * n
        return dof_phase2_lower(s) == expected and dof_phase2_upper(s) == expected

    return _violations(
        holds(s) for s in g.symmetric() if s.cfg.m in (2, 3) and s.k2 == s.n_i
    )


def _two_user_original_match(g: _GridCache) -> int:
    return _violations(
        dof_phase2_lower(s) == dof_two_user_original(s.n_i, s.n_j, s.n_eve, s.k2)
        and dof_phase2_upper(s) == dof_phase2_lower(s)
        for s in g.scenarios
        if s.cfg.m == 2 and s.n_i <= s.n_j
    )


def _modified_up_and_low(g: _GridCache) -> int:
    def holds(c: TwoUserModifiedConfig) -> bool:
        bounds = dof_modified_two_user(c)
        beta = pos(c.k_total - c.n_total)
        unified = (
            c.n1 * (2 * c.k_total - c.n_total)
            + (min(c.n_eve, c.delta_n) - min(c.n_eve, c.n_total)) * beta
        )
        terms = dof_modified_terms(c)
        from_terms = terms.term1 - (c.n1 * (c.k_total - c.n2) + terms.term2 - terms.term3)
        return (
            bounds.upper == bounds.lower_12
            and bounds.lower_12 - bounds.lower_21 == min(c.n_eve, c.delta_n) * beta
            and bounds.lower_12 == unified
            and bounds.lower_12 == from_terms
        )

    return _violations(holds(c) for c in g.modified())


def _modified_minus_original(g: _GridCache) -> int:
    return _violations(
        dof_modified_two_user(c).lower_12
        - dof_two_user_original(c.n1, c.n2, c.n_eve, c.k_total - c.n2)
        == c.n1 * c.delta_n
        for c in g.modified()
    )


def _region_boundaries(g: _GridCache) -> int:
    checks = []
    for n1, n2 in g.two_user_dims():
        dn, nt = n2 - n1, n1 + n2
        for k2 in g.grid.k2:
            checks.append(
                two_user_branch("C1", n1, n2, dn, k2) == two_user_branch("C2", n1, n2, dn, k2)
            )
            checks.append(
                two_user_branch("C2", n1, n2, nt, k2) == two_user_branch("C3", n1, n2, nt, k2)
            )
        for k in range(n2, g.grid.two_user_k_max + 1):
            checks.append(
                modified_branch("C1", n1, n2, k, dn) == modified_branch("C2", n1, n2, k, dn)
            )
            checks.append(
                modified_branch("C2", n1, n2, k, nt) == modified_branch("C3", n1, n2, k, nt)
            )
    return _violations(checks)


def _non_increasing(values: List[int]) -> bool:
    return all(b <= a for a, b in zip(values, values[1:]))


def _non_decreasing(values: List[int]) -> bool:
    return all(b >= a for a, b in zip(values, values[1:]))


def _monotonic_n_eve(g: _GridCache) -> int:
    checks = []
    for layout in _layouts(g.grid):
        for k2 in g.grid.k2:
            for i, j in _ordered_pairs(layout):
                checks.append(
                    _non_increasing(
                        [
                            dof_phase2_lower(DofScenario(NetworkConfig(layout, ne, k2), i, j))
                            for ne in g.grid.n_eve
                        ]
                    )
                )
    for n1, n2 in g.two_user_dims():
        for k2 in g.grid.k2:
            checks.append(
                _non_increasing(
                    [dof_two_user_original(n1, n2, ne, k2) for ne in g.grid.two_user_n_eve]
                )
            )
            checks.append(
                _non_increasing(
                    [dof_pairwise(n1, n2, ne, k2).lower for ne in g.grid.two_user_n_eve]
                )
            )
        for k in range(n2, g.grid.two_user_k_max + 1):
            checks.append(
                _non_increasing(
                    [
                        dof_modified_two_user(TwoUserModifiedConfig(n1, n2, k, ne)).lower_12
                        for ne in g.grid.two_user_n_eve
                    ]
                )
            )
    return _violations(checks)


def _monotonic_k(g: _GridCache) -> int:
    checks = []
    for n1, n2 in g.two_user_dims():
        for ne in g.grid.two_user_n_eve:
            checks.append(
                _non_decreasing([dof_two_user_original(n1, n2, ne, k2) for k2 in g.grid.k2])
            )
            checks.append(
                _non_decreasing(
                    [
                        dof_modified_two_user(TwoUserModifiedConfig(n1, n2, k, ne)).lower_12
                        for k in range(n2, g.grid.two_user_k_max + 1)
                    ]
                )
            )
    return _violations(checks)


def _m3_positive(g: _GridCache) -> int:
    return _violations(
        dof_phase2_lower_plus(s) > 0
        for s in g.symmetric()
        if s.cfg.m == 3 and s.n_eve >= 3 * s.n_i and 1 <= s.k2 < 2 * s.n_i
    )


def _two_user_saturation(g: _GridCache) -> int:
    return _violations(
        dof_two_user_original(n1, n2, ne, k2) == 2 * n1 * n1
        for n1, n2 in g.two_user_dims()
        for ne in g.grid.two_user_n_eve
        for k2 in g.grid.k2
        if ne >= n1 + n2 and k2 >= n1
    )


def _modified_growth(g: _GridCache) -> int:
    checks = []
    for n1, n2 in g.two_user_dims():
        nt = n1 + n2
        for ne in g.grid.two_user_n_eve:
            ks = range(n2, g.grid.two_user_k_max + 1)
            values = [dof_modified_two_user(TwoUserModifiedConfig(n1, n2, k, ne)).lower_12 for k in ks]
            if ne < nt:
                checks.append(all(b > a for a, b in zip(values, values[1:])))
            else:
                checks.extend(v == n1 * nt for k, v in zip(ks, values) if k >= nt)
    return _violations(checks)


def _pairwise_bounds(g: _GridCache) -> int:
    checks = []
    for n_ip, n_jp in itertools.product(g.grid.antennas, repeat=2):
        for ne in g.grid.n_eve:
            for k2 in g.grid.k2:
                b = dof_pairwise(n_ip, n_jp, ne, k2)
                checks.append(b.upper - b.lower == b.gap)
                if n_ip == n_jp:
                    expected = (2 * n_ip - min(ne, 2 * n_ip)) * k2
                    checks.append(b.lower == expected and b.upper == expected)
    return _violations(checks)


def _pairwise_slot_ratio(g: _GridCache) -> int:
    checks = []
    for m in g.grid.users:
        if m < 3:
            continue
        for n in g.grid.antennas:
            table = compare_schemes(NetworkConfig.symmetric(m, n, 0, 0), k2=0)
            # P_0 N / ((M - 1) N) = M / 2
            checks.append(2 * table.row("pairwise").phase1_slots == m * table.row("all_user").phase1_slots)
    return _violations(checks)


IDENTITY_FAMILIES: Dict[str, Callable[[_GridCache], int]] = {
    "gap_consistency": _gap_consistency,
    "lower_decomposition": _lower_decomposition,
    "freedom_oracle": _freedom_oracle,
    "symmetric_large_eve": _symmetric_large_eve,
    "symmetric_gap_table": _symmetric_gap_table,
    "large_m_zero": _large_m_zero,
    "k2_equals_n": _k2_equals_n,
    "two_user_original_match": _two_user_original_match,
    "modified_up_and_low": _modified_up_and_low,
    "modified_minus_original": _modified_minus_original,
    "region_boundaries": _region_boundaries,
    "monotonic_n_eve": _monotonic_n_eve,
    "monotonic_k": _monotonic_k,
    "m3_positive": _m3_positive,
    "two_user_saturation": _two_user_saturation,
    "modified_growth": _modified_growth,
    "pairwise_bounds": _pairwise_bounds,
    "pairwise_slot_ratio": _pairwise_slot_ratio,
}


IDENTITY_MANIFEST = (
    "gap_consistency",
    "k2_equals_n",
    "large_m_zero",
    "lower_decomposition",
    "freedom_oracle",
    "m3_positive",
    "modified_growth",
    "modified_minus_original",
    "modified_up_and_low",
    "monotonic_k",
    "monotonic_n_eve",
    "pairwise_bounds",
    "pairwise_slot_ratio",
    "region_boundaries",
    "symmetric_gap_table",
    "symmetric_large_eve",
    "two_user_original_match",
    "two_user_saturation",
)


def identity_suite(grid: Optional[IdentityGrid] = None) -> List[CheckResult]:
    """
    One CheckResult per identity family with measured = violating grid
    points, plus identity.manifest counting families that ran but are not
    in IDENTITY_MANIFEST or are listed there but did not run.
    """
    cache = _GridCache(grid or IdentityGrid())
    results = [
        CheckResult(name=f"identity.{family}", measured=check(cache), target=0, tolerance=0)
        for family, check in IDENTITY_FAMILIES.items()
    ]
    drift = set(IDENTITY_FAMILIES) ^ set(IDENTITY_MANIFEST)
    results.append(
        CheckResult(
            name="identity.manifest",
            measured=len(drift),
            target=0,
            tolerance=0,
        )
    )
    log.info(
        "Finished identity suite",
        extra={"families": len(IDENTITY_FAMILIES), "scenarios": len(cache.scenarios)},
    )
    return results


def identity_control(grid: Optional[IdentityGrid] = None) -> List[CheckResult]:
    """The gap identity with the gap shifted by one; must report violations."""
    cache = _GridCache(grid or IdentityGrid())
    bad = _violations(
        dof_phase2_upper(s) - dof_phase2_lower(s) == dof_gap(s) + 1
        for s in cache.scenarios
    )
    return [
        CheckResult(
            name=f"{CONTROL_PREFIX}identity.gap_consistency",
            measured=bad,
            target=0,
            tolerance=0,
            control=True,
        )
    ]
