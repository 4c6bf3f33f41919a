"""
Numeric freedom counting for Eve's phase-2 entropies.

At high power the DoF of h(Y | known blocks) equals the number of complex
dimensions the observation can still move in, which is the generic rank
of the Jacobian of the map from the unknown blocks to the observation.
The maps here are polynomial of degree one in every single coordinate, so
a unit step along one coordinate yields the exact Jacobian column.
"""

import logging
from typing import Callable, List, Tuple

import numpy as np

from anecelab.model import NetworkConfig, require_valid
from anecelab.pilots import build_pilots, qr_split

from .linalg import numerical_rank
from .rng import crandn, substream

log = logging.getLogger(__name__)

FREEDOM_TERMS = ("ye_given_hep", "joint_i_e")
JACOBIAN_RTOL = 1e-9


class UnsupportedFreedomTermError(ValueError):
    pass


def jacobian_rank(
    fn: Callable[..., np.ndarray],
    shapes: List[Tuple[int, int]],
    rng: np.random.Generator,
) -> int:
    point = [crandn(rng, shape) for shape in shapes]
    base = fn(*point)

    columns = []
    for k, shape in enumerate(shapes):
        for idx in np.ndindex(*shape):
            bumped = list(point)
            bumped[k] = point[k].copy()
            bumped[k][idx] += 1.0
            columns.append(fn(*bumped) - base)

    if not columns or base.size == 0:
        return 0
    return numerical_rank(np.column_stack(columns), rtol=JACOBIAN_RTOL)


def jacobian_freedom_count(term: str, cfg: NetworkConfig, i: int, seed: int) -> int:
    """
    Count the freedoms of h(Y_E | H_{E,P}) ("ye_given_hep") or of
    h(Y_i, Y_E | X_i, H_i, H_{E,P}) ("joint_i_e") for user i.

    Eve knows H_{E,P} = H_E Q_P from phase 1; H_{E,P,perp} = H_E Q_{P,perp}
    and every symbol block not in the conditioning set are unknown.
    """
    if term not in FREEDOM_TERMS:
        raise UnsupportedFreedomTermError(f"no numeric counter for term {term!r}")
    require_valid(cfg)

    split = qr_split(build_pilots(cfg, seed))
    rng = substream(seed, "freedom", FREEDOM_TERMS.index(term), i)
    h_p = crandn(rng, (cfg.n_eve, split.q_p.shape[1]))
    perp_shape = (cfg.n_eve, split.q_perp.shape[1])

    def eve_rx(h_perp: np.ndarray, x: np.ndarray) -> np.ndarray:
        return h_p @ (split.q_p.conj().T @ x) + h_perp @ (split.q_perp.conj().T @ x)

    if term == "ye_given_hep":

        def observe(h_perp, x):
            return eve_rx(h_perp, x).ravel()

        shapes = [perp_shape, (cfg.n_total, cfg.k2)]
    else:
        offset = cfg.row_offsets[i]
        x_i = crandn(rng, (cfg.antennas[i], cfg.k2))
        h_i = crandn(rng, (cfg.antennas[i], cfg.n_total - cfg.antennas[i]))

        def observe(h_perp, x_others):
            x = np.vstack([x_others[:offset], x_i, x_others[offset:]])
            return np.concatenate([(h_i @ x_others).ravel(), eve_rx(h_perp, x).ravel()])

        shapes = [perp_shape, (cfg.n_total - cfg.antennas[i], cfg.k2)]

    count = jacobian_rank(observe, shapes, rng)
    log.debug(
        "Counted freedoms by Jacobian rank",
        extra={"term": term, "antennas": cfg.antennas, "user": i, "count": count},
    )
    return count
