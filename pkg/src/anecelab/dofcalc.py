"""
Closed-form DoF and SDoF evaluators.

Everything here is exact integer arithmetic with (x)^+ = max(x, 0). Piecewise
forms are evaluated branch by branch; the regions are closed on both sides
and adjacent branches agree on the boundaries.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Mapping, NamedTuple, Tuple, Union

from anecelab.model import (
    NetworkConfig,
    TwoUserModifiedConfig,
    require_valid,
    require_valid_two_user,
)


class UnknownSchemeError(ValueError):
    pass


class UnknownTermError(ValueError):
    pass


class Scheme(str, Enum):
    ALL_USER = "all_user"
    PAIRWISE = "pairwise"
    MODIFIED_TWO_USER = "modified_two_user"

    @classmethod
    def parse(cls, value: Union[str, "Scheme"]) -> "Scheme":
        try:
            return cls(value)
        except ValueError:
            raise UnknownSchemeError(f"unknown scheme {value!r}")


def pos(x: int) -> int:
    return max(x, 0)


@dataclass(frozen=True)
class DofScenario:
    """
    A network and an ordered user pair (i, j). Derived quantities are
    properties so they always follow cfg.
    """

    cfg: NetworkConfig
    i: int
    j: int

    def __post_init__(self):
        require_valid(self.cfg)
        if self.i == self.j or not (
            0 <= self.i < self.cfg.m and 0 <= self.j < self.cfg.m
        ):
            raise ValueError(
                f"need two distinct users of {self.cfg.m}, got ({self.i}, {self.j})"
            )

    @property
    def n_i(self) -> int:
        return self.cfg.antennas[self.i]

    @property
    def n_j(self) -> int:
        return self.cfg.antennas[self.j]

    @property
    def n_total(self) -> int:
        return self.cfg.n_total

    @property
    def n_min(self) -> int:
        return self.cfg.n_min

    @property
    def n_eve(self) -> int:
        return self.cfg.n_eve

    @property
    def k2(self) -> int:
        return self.cfg.k2

    @property
    def delta_k2(self) -> int:
        return pos(self.cfg.k2 - self.cfg.n_min)

    @property
    def delta_n_eve(self) -> int:
        return pos(self.cfg.n_eve - self.cfg.n_total)

    def swapped(self) -> "DofScenario":
        return DofScenario(self.cfg, self.j, self.i)


class EntropyTerms(NamedTuple):
    h_yi_given_hi: int
    h_ye_given_hep: int
    h_joint_i_e: int
    h_joint_i_j_e: int


class PairwiseDof(NamedTuple):
    lower: int
    upper: int
    gap: int


class ModifiedDof(NamedTuple):
    lower_12: int
    lower_21: int
    upper: int


class ModifiedTerms(NamedTuple):
    term1: int
    term2: int
    term3: int
    term4: int


def dof_phase1(n_i: int, n_j: int) -> int:
    if n_i < 1 or n_j < 1:
        raise ValueError(f"antenna counts must be positive, got ({n_i}, {n_j})")
    return n_i * n_j


def dof_cij(s: DofScenario) -> int:
    nt = s.n_total
    return s.k2 * (
        min(s.n_i, nt - s.n_i) + min(s.n_j, nt - s.n_j) - min(s.n_i + s.n_j, nt - s.n_i - s.n_j)
    )


def dof_entropy_terms(s: DofScenario) -> EntropyTerms:
    nt, ni, nj, ne, k2, dk2 = s.n_total, s.n_i, s.n_j, s.n_eve, s.k2, s.delta_k2
    eve_alpha = ne * min(s.n_min, k2)

    h_yi = min(ni, nt - ni) * k2
    h_ye = eve_alpha + min(ne, nt) * dk2
    h_joint_i = k2 * min(ni, nt - ni) + eve_alpha + dk2 * min(ne, pos(nt - 2 * ni))
    h_joint_ij = (
        k2 * min(ni, nt - ni - nj)
        + k2 * min(nj, pos(nt - 2 * ni - nj))
        + eve_alpha
        + dk2 * min(ne, pos(nt - 2 * ni - 2 * nj))
    )
    return EntropyTerms(h_yi, h_ye, h_joint_i, h_joint_ij)


def dof_leakage(s: DofScenario) -> int:
    t = dof_entropy_terms(s)
    return t.h_yi_given_hi + t.h_ye_given_hep - t.h_joint_i_e


def dof_phase2_lower(s: DofScenario) -> int:
    nt, ni, nj, ne, k2, dk2 = s.n_total, s.n_i, s.n_j, s.n_eve, s.k2, s.delta_k2
    return (
        k2 * min(nj, nt - nj)
        + k2 * min(ni, nt - ni)
        + dk2 * min(ne, pos(nt - 2 * ni))
        - k2 * min(ni + nj, nt - ni - nj)
        - dk2 * min(ne, nt)
    )


def dof_phase2_lower_plus(s: DofScenario) -> int:
    return pos(dof_phase2_lower(s))


def dof_phase2_upper(s: DofScenario) -> int:
    nt, ni, nj, ne, k2, dk2 = s.n_total, s.n_i, s.n_j, s.n_eve, s.k2, s.delta_k2
    return (
        k2 * min(ni, nt - ni)
        + k2 * min(nj, nt - nj)
        + dk2 * min(ne, pos(nt - 2 * ni))
        + dk2 * min(ne, pos(nt - 2 * nj))
        - dk2 * min(ne, nt)
        - dk2 * min(ne, pos(nt - 2 * ni - 2 * nj))
        - k2 * min(ni, nt - ni - nj)
        - k2 * min(nj, pos(nt - 2 * ni - nj))
    )


def dof_gap(s: DofScenario) -> int:
    nt, ni, nj, ne, k2, dk2 = s.n_total, s.n_i, s.n_j, s.n_eve, s.k2, s.delta_k2
    return (
        dk2 * min(ne, pos(nt - 2 * nj))
        + k2 * min(ni + nj, nt - ni - nj)
        - k2 * min(ni, nt - ni - nj)
        - k2 * min(nj, pos(nt - 2 * ni - nj))
        - dk2 * min(ne, pos(nt - 2 * ni - 2 * nj))
    )


def two_user_region(n1: int, n2: int, n_eve: int) -> str:
    """C1 for N_E <= dN, C2 for dN <= N_E <= N_T, C3 for N_E >= N_T."""
    if n_eve <= n2 - n1:
        return "C1"
    if n_eve <= n1 + n2:
        return "C2"
    return "C3"


def two_user_branch(region: str, n1: int, n2: int, n_eve: int, k2: int) -> int:
    dk2 = pos(k2 - n1)
    if region == "C1":
        return 2 * k2 * n1
    if region == "C2":
        return 2 * k2 * n1 - dk2 * (n_eve - (n2 - n1))
    return 2 * min(n1, k2) * n1


def dof_two_user_original(n1: int, n2: int, n_eve: int, k2: int) -> int:
    """Phase-2 SDoF of the original two-user scheme, N_1 <= N_2."""
    if n1 > n2:
        raise ValueError(f"need N_1 <= N_2, got ({n1}, {n2})")
    if k2 < 0:
        raise ValueError(f"K_2 must be non-negative, got {k2}")
    return two_user_branch(two_user_region(n1, n2, n_eve), n1, n2, n_eve, k2)


def dof_pairwise(n_ip: int, n_jp: int, n_eve: int, k2_session: int) -> PairwiseDof:
    """Phase-2 bounds of one two-user session inside the pair-wise schedule."""
    if k2_session < 0:
        raise ValueError(f"k2 must be non-negative, got {k2_session}")
    k2 = k2_session
    lower = (
        min(n_ip, n_jp) * k2
        - min(n_eve, n_ip + n_jp) * k2
        + min(n_eve + n_ip, n_jp) * k2
    )
    upper = (
        -min(n_eve, n_ip + n_jp) * k2
        + min(n_eve + n_ip, n_jp) * k2
        + min(n_eve + n_jp, n_ip) * k2
    )
    gap = 0 if n_ip <= n_jp else (min(n_eve + n_jp, n_ip) - n_jp) * k2
    return PairwiseDof(lower, upper, gap)


def dof_modified_terms(cfg2u: TwoUserModifiedConfig) -> ModifiedTerms:
    """C_key,0 DoF (term1) and the three entropy DoFs of the modified scheme."""
    require_valid_two_user(cfg2u)
    n1, n2, k, ne = cfg2u.n1, cfg2u.n2, cfg2u.k_total, cfg2u.n_eve
    nt, dn = cfg2u.n_total, cfg2u.delta_n
    alpha = min(n2, k - n1)
    beta = pos(k - nt)

    term1 = n1 * (k - n1) + n1 * (k - n2)
    term2 = ne * alpha + min(ne, nt) * beta
    term3 = n1 * (k - n2) + ne * alpha + min(ne, dn) * beta
    term4 = n1 * (k - n1) + ne * alpha
    return ModifiedTerms(term1, term2, term3, term4)


def modified_branch(region: str, n1: int, n2: int, k: int, n_eve: int) -> int:
    nt, dn = n1 + n2, n2 - n1
    if region == "C1":
        return n1 * (2 * k - nt)
    if region == "C2":
        return n1 * (2 * k - nt) - (n_eve - dn) * pos(k - nt)
    return n1 * (2 * k - nt - pos(2 * k - 2 * nt))


def dof_modified_two_user(cfg2u: TwoUserModifiedConfig) -> ModifiedDof:
    require_valid_two_user(cfg2u)
    n1, n2, k, ne = cfg2u.n1, cfg2u.n2, cfg2u.k_total, cfg2u.n_eve
    nt = cfg2u.n_total

    lower_12 = modified_branch(two_user_region(n1, n2, ne), n1, n2, k, ne)
    lower_21 = n1 * (2 * k - nt) - min(ne, nt) * pos(k - nt)
    return ModifiedDof(lower_12=lower_12, lower_21=lower_21, upper=lower_12)


def dof_gap_symmetric(m: int, n: int, n_eve: int, k2: int) -> int:
    """Upper minus lower bound for a network of M users with N antennas each."""
    dk2 = pos(k2 - n)
    if m == 2:
        return 0
    if m == 3:
        return dk2 * min(n_eve, n)
    return dk2 * (min(n_eve, (m - 2) * n) - min(n_eve, (m - 4) * n))


def dof_phase2_symmetric_large_eve(m: int, n: int, k2: int) -> int:
    """Clamped lower bound for a symmetric network once N_E >= M N."""
    if m == 2:
        return 2 * n * min(n, k2)
    if m == 3:
        return n * pos(2 * min(n, k2) - k2)
    return 0


def large_m_threshold(n: int, n_eve: int) -> int:
    """Smallest M from which both bounds vanish in a symmetric network."""
    return 4 + math.ceil(n_eve / n)


def sessions(m: int) -> int:
    return m * (m - 1) // 2


def dof_total(scheme: Union[str, Scheme], params: Mapping) -> int:
    """
    Phase-1 plus clamped phase-2 SDoF.

    params by scheme:
      all_user: cfg (NetworkConfig), optional pair (i, j), default (0, 1)
      pairwise: n_ip, n_jp, n_eve, k2_session
      modified_two_user: cfg2u (TwoUserModifiedConfig)
    """
    scheme = Scheme.parse(scheme)

    if scheme is Scheme.ALL_USER:
        i, j = params.get("pair", (0, 1))
        s = DofScenario(params["cfg"], i, j)
        return dof_phase1(s.n_i, s.n_j) + dof_phase2_lower_plus(s)

    if scheme is Scheme.PAIRWISE:
        bounds = dof_pairwise(
            params["n_ip"], params["n_jp"], params["n_eve"], params["k2_session"]
        )
        return dof_phase1(params["n_ip"], params["n_jp"]) + pos(bounds.upper)

    cfg2u = params["cfg2u"]
    return dof_phase1(cfg2u.n1, cfg2u.n2) + pos(dof_modified_two_user(cfg2u).lower_12)


FREEDOM_TERMS = (
    "ye_given_hep",
    "joint_i_e",
    "joint_i_j_e",
    "modified_term2",
    "modified_term3",
    "modified_term4",
)


class Block(NamedTuple):
    """A block of an observation with rows x cols entries that stay free."""

    name: str
    rows: int
    cols: int

    @property
    def size(self) -> int:
        return self.rows * self.cols


def _eve_blocks(
    n_eve: int, n_total: int, alpha_cols: int, beta_cols: int, unknown_rows: int
) -> List[Block]:
    """
    Eve's phase-2 reception split into an alpha part, fully free because
    her channel off the pilot span is still unknown, and a beta part whose
    upper (a) rows are free only up to the number of symbol rows still
    unknown, while the lower (b) rows are then determined.
    """
    a_rows = min(n_eve, n_total)
    return [
        Block("eve_alpha", n_eve, alpha_cols),
        Block("eve_beta_a", min(a_rows, unknown_rows), beta_cols),
        Block("eve_beta_b", 0, beta_cols),
    ]


def freedom_blocks(
    term: str, dims: Union[DofScenario, TwoUserModifiedConfig]
) -> List[Block]:
    if term not in FREEDOM_TERMS:
        raise UnknownTermError(f"unknown entropy term {term!r}")

    if term.startswith("modified_"):
        if not isinstance(dims, TwoUserModifiedConfig):
            raise TypeError(f"{term} needs a TwoUserModifiedConfig")
        n1, n2, k, ne = dims.n1, dims.n2, dims.k_total, dims.n_eve
        nt = dims.n_total
        alpha_cols = min(n2, k - n1)
        beta_cols = pos(k - nt)
        if term == "modified_term2":
            return _eve_blocks(ne, nt, alpha_cols, beta_cols, unknown_rows=nt)
        if term == "modified_term3":
            # Y_1 = H_{1,2} X_2 pins down N_1 of the N_2 rows of X_2
            y1 = Block("y1", min(n1, n2), k - n2)
            return [y1] + _eve_blocks(ne, nt, alpha_cols, beta_cols, n2 - y1.rows)
        # Y_2 = H_{2,1} X_1 pins down all of X_1
        y2 = Block("y2", min(n2, n1), k - n1)
        return [y2] + _eve_blocks(ne, nt, alpha_cols, beta_cols, n1 - y2.rows)

    if not isinstance(dims, DofScenario):
        raise TypeError(f"{term} needs a DofScenario")
    s = dims
    alpha_cols = min(s.n_min, s.k2)
    beta_cols = s.k2 - alpha_cols

    if term == "ye_given_hep":
        return _eve_blocks(s.n_eve, s.n_total, alpha_cols, beta_cols, s.n_total)

    if term == "joint_i_e":
        unknown = s.n_total - s.n_i
        yi = Block("y_i", min(s.n_i, unknown), s.k2)
        return [yi] + _eve_blocks(
            s.n_eve, s.n_total, alpha_cols, beta_cols, unknown - yi.rows
        )

    unknown = s.n_total - s.n_i - s.n_j
    yi = Block("y_i", min(s.n_i, unknown), s.k2)
    unknown -= yi.rows
    yj = Block("y_j", min(s.n_j, unknown), s.k2)
    unknown -= yj.rows
    return [yi, yj] + _eve_blocks(s.n_eve, s.n_total, alpha_cols, beta_cols, unknown)


def freedom_count_oracle(
    term: str, dims: Union[DofScenario, TwoUserModifiedConfig]
) -> int:
    """Entropy DoF as the total size of the blocks left free by the conditioning."""
    return sum(block.size for block in freedom_blocks(term, dims))


def closed_form_term(term: str, dims: Union[DofScenario, TwoUserModifiedConfig]) -> int:
    """The closed-form counterpart of a freedom_count_oracle term."""
    if term not in FREEDOM_TERMS:
        raise UnknownTermError(f"unknown entropy term {term!r}")
    if term.startswith("modified_"):
        terms = dof_modified_terms(dims)
        return getattr(terms, term.removeprefix("modified_"))
    entropy = dof_entropy_terms(dims)
    return {
        "ye_given_hep": entropy.h_ye_given_hep,
        "joint_i_e": entropy.h_joint_i_e,
        "joint_i_j_e": entropy.h_joint_i_j_e,
    }[term]


def all_user_report(s: DofScenario) -> Dict[str, int]:
    """Every all-user formula for one ordered pair, keyed by stable identifier."""
    terms = dof_entropy_terms(s)
    report = {
        "dof_phase1": dof_phase1(s.n_i, s.n_j),
        "dof_cij": dof_cij(s),
        "dof_leakage": dof_leakage(s),
        "h_yi_given_hi": terms.h_yi_given_hi,
        "h_ye_given_hep": terms.h_ye_given_hep,
        "h_joint_i_e": terms.h_joint_i_e,
        "h_joint_i_j_e": terms.h_joint_i_j_e,
        "dof_phase2_lower": dof_phase2_lower(s),
        "dof_phase2_lower_plus": dof_phase2_lower_plus(s),
        "dof_phase2_upper": dof_phase2_upper(s),
        "dof_gap": dof_gap(s),
        "dof_total": dof_total(Scheme.ALL_USER, {"cfg": s.cfg, "pair": (s.i, s.j)}),
    }
    if s.cfg.m == 2:
        n1, n2 = sorted((s.n_i, s.n_j))
        report["dof_two_user_original"] = dof_two_user_original(n1, n2, s.n_eve, s.k2)
    return report


def pairwise_report(cfg: NetworkConfig, pair: Tuple[int, int]) -> Dict[str, int]:
    i, j = pair
    p0 = sessions(cfg.m)
    if cfg.k2 % p0:
        raise ValueError(f"K_2 = {cfg.k2} is not divisible by P_0 = {p0}")
    k2_session = cfg.k2 // p0
    n_ip, n_jp = cfg.antennas[i], cfg.antennas[j]
    bounds = dof_pairwise(n_ip, n_jp, cfg.n_eve, k2_session)
    return {
        "dof_phase1": dof_phase1(n_ip, n_jp),
        "dof_phase2_lower": bounds.lower,
        "dof_phase2_upper": bounds.upper,
        "dof_gap": bounds.gap,
        "k2_session": k2_session,
        "sessions": p0,
        "dof_total": dof_total(
            Scheme.PAIRWISE,
            {"n_ip": n_ip, "n_jp": n_jp, "n_eve": cfg.n_eve, "k2_session": k2_session},
        ),
    }


def modified_report(cfg2u: TwoUserModifiedConfig) -> Dict[str, int]:
    bounds = dof_modified_two_user(cfg2u)
    terms = dof_modified_terms(cfg2u)
    original = dof_two_user_original(
        cfg2u.n1, cfg2u.n2, cfg2u.n_eve, cfg2u.k_total - cfg2u.n2
    )
    return {
        "dof_phase1": dof_phase1(cfg2u.n1, cfg2u.n2),
        "dof_phase2": bounds.lower_12,
        "dof_phase2_lower": bounds.lower_12,
        "dof_phase2_lower_21": bounds.lower_21,
        "dof_phase2_upper": bounds.upper,
        "dof_gap": bounds.upper - bounds.lower_12,
        "dof_key0": terms.term1,
        "dof_original_phase2": original,
        "dof_gain_vs_original": bounds.lower_12 - original,
        "dof_total": dof_total(Scheme.MODIFIED_TWO_USER, {"cfg2u": cfg2u}),
    }
