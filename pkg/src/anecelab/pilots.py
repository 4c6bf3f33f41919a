"""
Collaborative pilot matrices for the three ANECE variants.

All-user pilots stack into an N_T x K_1 matrix P of rank N_T - N_min whose
row blocks P_i have full row rank and whose complements P_(i) have rank
N_T - N_i. Eve's phase-1 observation only resolves her channel on the
column span Q_P of P; the complement Q_{P,perp} is her ambiguity subspace.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Mapping, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from anecelab.model import (
    NetworkConfig,
    ShapeMismatchError,
    TwoUserModifiedConfig,
    require_valid,
    require_valid_two_user,
)
from anecelab.numkernel.linalg import numerical_rank
from anecelab.numkernel.rng import crandn, substream

log = logging.getLogger(__name__)

MAX_ATTEMPTS = 8
RECONSTRUCTION_TOL = 1e-10


class PilotConstructionError(RuntimeError):
    pass


class PilotValidationError(ValueError):
    pass


class PairwiseScheduleError(ValueError):
    pass


class MatrixFormatError(ValueError):
    pass


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PilotSet:
    """
    Attributes
    ----------
    blocks: tuple of ndarray
        P_i of shape N_i x K_1, in user order.
    """

    blocks: Tuple[np.ndarray, ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(_frozen(b) for b in self.blocks))

    @classmethod
    def from_stacked(cls, stacked: np.ndarray, antennas: Sequence[int]) -> "PilotSet":
        stacked = np.asarray(stacked)
        if stacked.ndim != 2 or stacked.shape[0] != sum(antennas):
            raise ShapeMismatchError(
                f"stacked pilots have {stacked.shape[0]} rows, "
                f"antennas need {sum(antennas)}"
            )
        cuts = np.cumsum(antennas)[:-1]
        return cls(tuple(np.split(stacked, cuts, axis=0)))

    @property
    def stacked(self) -> np.ndarray:
        return np.vstack(self.blocks)

    @property
    def antennas(self) -> Tuple[int, ...]:
        return tuple(b.shape[0] for b in self.blocks)

    @property
    def k1(self) -> int:
        return self.blocks[0].shape[1]

    def without(self, *users: int) -> np.ndarray:
        """P with the given users' row blocks removed, e.g. P_(i)."""
        kept = [b for l, b in enumerate(self.blocks) if l not in users]
        if not kept:
            return np.zeros((0, self.k1), dtype=complex)
        return np.vstack(kept)


@dataclass(frozen=True, eq=False)
class PilotQrSplit:
    """
    Attributes
    ----------
    q_p: ndarray
        N_T x (N_T - N_min), orthonormal basis of the column span of P.
    q_perp: ndarray
        N_T x N_min, orthonormal complement of q_p.
    r_p: ndarray
        (N_T - N_min) x K_1 with P = q_p @ r_p, in the column order of P.
        It is not triangular in general; r_p[:, pivots] is upper
        triangular with a real non-negative diagonal.
    pivots: ndarray
        Column permutation chosen by the pivoted QR.
    """

    q_p: np.ndarray
    q_perp: np.ndarray
    r_p: np.ndarray
    pivots: np.ndarray

    @property
    def unitary(self) -> np.ndarray:
        return np.hstack([self.q_p, self.q_perp])


@dataclass(frozen=True, eq=False)
class PairwisePilotMatrix:
    """
    Attributes
    ----------
    matrix: ndarray
        N_T x (P_0 * k1); session p occupies columns p*k1 .. (p+1)*k1 - 1.
    session_index: mapping p -> (i_p, j_p)
        Zero-based users active in session p.
    k1: int
        Pilot length of one session.
    """

    matrix: np.ndarray
    session_index: Mapping[int, Tuple[int, int]]
    k1: int


@dataclass(frozen=True, eq=False)
class ModifiedPilotPair:
    p1: np.ndarray
    p2: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "p1", _frozen(self.p1))
        object.__setattr__(self, "p2", _frozen(self.p2))


def build_pilots(cfg: NetworkConfig, seed: int) -> PilotSet:
    """
    Random pilots meeting the rank conditions.

    A random N_T x N_T matrix loses its last N_min columns; any further
    columns up to K_1 are random combinations of the kept ones, so rank(P)
    stays N_T - N_min.
    """
    require_valid(cfg)
    rank = cfg.min_k1

    for attempt in range(MAX_ATTEMPTS):
        rng = substream(seed, "pilots", attempt)
        base = crandn(rng, (cfg.n_total, cfg.n_total))[:, :rank]
        if cfg.k1 > rank:
            mix = crandn(rng, (rank, cfg.k1 - rank))
            stacked = np.hstack([base, base @ mix])
        else:
            stacked = base

        ps = PilotSet.from_stacked(stacked, cfg.antennas)
        violations = validate_pilots(ps, cfg)
        if not violations:
            return ps

        log.warning(
            "Pilot draw failed rank audit, retrying",
            extra={"attempt": attempt, "seed": seed, "violations": violations},
        )

    raise PilotConstructionError(
        f"no valid pilots after {MAX_ATTEMPTS} attempts for {cfg}"
    )


def validate_pilots(ps: PilotSet, cfg: NetworkConfig) -> List[str]:
    if ps.antennas != cfg.antennas or ps.k1 != cfg.k1:
        raise ShapeMismatchError(
            f"pilot blocks {[b.shape for b in ps.blocks]} do not match "
            f"antennas {cfg.antennas} with K_1={cfg.k1}"
        )

    violations = []
    for i, block in enumerate(ps.blocks):
        if numerical_rank(block) < cfg.antennas[i]:
            violations.append(f"rank(P_{i + 1}) < N_{i + 1}")
    for i in range(cfg.m):
        if numerical_rank(ps.without(i)) != cfg.n_total - cfg.antennas[i]:
            violations.append(f"rank(P_({i + 1})) ≠ N_T−N_{i + 1}")
    if numerical_rank(ps.stacked) != cfg.min_k1:
        violations.append("rank(P) ≠ N_T−N_min")
    return violations


def qr_split(ps: PilotSet) -> PilotQrSplit:
    """
    Split P = Q_P R_P with the complement Q_{P,perp}.

    Column-pivoted QR keeps the leading columns of Q on the span of P even
    when the leading columns of P are dependent. Columns of Q_P are rotated
    so that the diagonal of the pivoted triangular factor is real
    non-negative; r_p itself keeps the original column order.
    """
    stacked = ps.stacked
    rank = sum(ps.antennas) - min(ps.antennas)
    if numerical_rank(stacked) != rank:
        raise PilotValidationError(
            f"rank(P) = {numerical_rank(stacked)}, expected N_T−N_min = {rank}"
        )

    q, r, pivots = scipy.linalg.qr(stacked, mode="full", pivoting=True)
    diag = np.diagonal(r)[:rank]
    phase = np.ones(rank, dtype=complex)
    nonzero = np.abs(diag) > 0
    phase[nonzero] = diag[nonzero] / np.abs(diag[nonzero])

    q_p = q[:, :rank] * phase
    q_perp = q[:, rank:]
    r_p = q_p.conj().T @ stacked

    residual = np.linalg.norm(stacked - q_p @ r_p) / np.linalg.norm(stacked)
    if residual > RECONSTRUCTION_TOL:
        raise PilotValidationError(f"QR reconstruction residual {residual:.3e}")

    return PilotQrSplit(q_p=q_p, q_perp=q_perp, r_p=r_p, pivots=pivots)


def build_pairwise_matrix(
    cfg: NetworkConfig, per_session_blocks: Sequence[np.ndarray]
) -> PairwisePilotMatrix:
    """
    Lay out the sequential pair-wise sessions as one N_T x P_0*k1 matrix.
    Session p carries P_{i_p} and P_{j_p} in their row blocks and zeros
    elsewhere.
    """
    if cfg.m < 3:
        raise PairwiseScheduleError(
            f"pair-wise schedule needs M ≥ 3 for full row rank, got M={cfg.m}"
        )
    if len(per_session_blocks) != cfg.m:
        raise ShapeMismatchError(
            f"expected {cfg.m} pilot blocks, got {len(per_session_blocks)}"
        )

    blocks = [np.asarray(b, dtype=complex) for b in per_session_blocks]
    k1 = blocks[0].shape[1]
    for i, block in enumerate(blocks):
        if block.shape != (cfg.antennas[i], k1):
            raise ShapeMismatchError(
                f"P_{i + 1} has shape {block.shape}, expected {(cfg.antennas[i], k1)}"
            )
        if numerical_rank(block) < cfg.antennas[i]:
            raise PilotValidationError(f"P_{i + 1} lacks full row rank")
    if k1 < max(cfg.antennas):
        raise PilotValidationError(f"k1 = {k1} < max N_i = {max(cfg.antennas)}")

    offsets = cfg.row_offsets
    sessions: Dict[int, Tuple[int, int]] = {}
    matrix = np.zeros((cfg.n_total, len(cfg.pairs) * k1), dtype=complex)
    for p, (i, j) in enumerate(cfg.pairs):
        cols = slice(p * k1, (p + 1) * k1)
        for user in (i, j):
            rows = slice(offsets[user], offsets[user] + cfg.antennas[user])
            matrix[rows, cols] = blocks[user]
        sessions[p] = (i, j)

    matrix.setflags(write=False)
    return PairwisePilotMatrix(matrix=matrix, session_index=sessions, k1=k1)


def build_session_blocks(cfg: NetworkConfig, seed: int) -> List[np.ndarray]:
    """Random full-row-rank P_i of length max_i N_i for the pair-wise schedule."""
    k1 = max(cfg.antennas)
    for attempt in range(MAX_ATTEMPTS):
        rng = substream(seed, "session-pilots", attempt)
        blocks = [crandn(rng, (n, k1)) for n in cfg.antennas]
        if all(numerical_rank(b) == b.shape[0] for b in blocks):
            return blocks
        log.warning(
            "Session pilot draw lost row rank, retrying",
            extra={"attempt": attempt, "seed": seed},
        )
    raise PilotConstructionError(f"no full-row-rank session pilots for {cfg}")


def build_square_pilots(cfg2u: TwoUserModifiedConfig, seed: int) -> ModifiedPilotPair:
    require_valid_two_user(cfg2u)

    for attempt in range(MAX_ATTEMPTS):
        rng = substream(seed, "pilots", attempt)
        p1 = crandn(rng, (cfg2u.n1, cfg2u.n1))
        p2 = crandn(rng, (cfg2u.n2, cfg2u.n2))
        if numerical_rank(p1) == cfg2u.n1 and numerical_rank(p2) == cfg2u.n2:
            return ModifiedPilotPair(p1=p1, p2=p2)
        log.warning(
            "Square pilot draw was singular, retrying",
            extra={"attempt": attempt, "seed": seed},
        )

    raise PilotConstructionError(f"no nonsingular square pilots for {cfg2u}")


def write_matrix(path: Union[str, Path], m: np.ndarray) -> None:
    """
    Plain-text matrix: a "rows cols" header, then one line per row of
    whitespace-separated "re im" pairs.
    """
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    lines = [f"{m.shape[0]} {m.shape[1]}"]
    for row in m:
        lines.append(" ".join(f"{z.real:.17g} {z.imag:.17g}" for z in row))

    with open(path, "w", newline="\n") as f:
        f.write("\n".join(lines) + "\n")


def read_matrix(path: Union[str, Path]) -> np.ndarray:
    try:
        with open(path, "r") as f:
            lines = [line.split() for line in f if line.strip()]
    except FileNotFoundError:
        raise MatrixFormatError(f"Matrix file not found. path={path}")

    if not lines or len(lines[0]) != 2:
        raise MatrixFormatError(f"Missing 'rows cols' header. path={path}")

    try:
        rows, cols = (int(v) for v in lines[0])
        body = [[float(v) for v in line] for line in lines[1:]]
    except ValueError:
        raise MatrixFormatError(f"Non-numeric matrix entry. path={path}")

    if rows < 0 or cols < 0 or len(body) != rows:
        raise MatrixFormatError(f"Expected {rows} rows, found {len(body)}. path={path}")
    if any(len(line) != 2 * cols for line in body):
        raise MatrixFormatError(f"Expected {cols} re/im pairs per row. path={path}")

    values = np.array(body, dtype=float).reshape(rows, 2 * cols)
    m = values[:, 0::2] + 1j * values[:, 1::2]
    if not np.all(np.isfinite(m)):
        raise MatrixFormatError(f"Non-finite matrix entry. path={path}")
    return m
