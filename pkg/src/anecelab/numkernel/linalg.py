from typing import Optional

import numpy as np

from anecelab.model import ShapeMismatchError

DEFAULT_POWER_RATIO = 2.0**10
DEFAULT_GROWTH_FRACTION = 0.1


class NotPositiveDefiniteError(ValueError):
    pass


def logdet_hpd(m: np.ndarray) -> float:
    """
    Base-2 log-determinant of a Hermitian positive definite matrix.

    Leading axes are treated as a batch, in which case an array of values
    is returned.
    """
    m = np.asarray(m)
    if m.ndim < 2 or m.shape[-1] != m.shape[-2]:
        raise ShapeMismatchError(f"logdet_hpd needs square matrices, got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NotPositiveDefiniteError("matrix has non-finite entries")

    try:
        chol = np.linalg.cholesky(m)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(str(exc)) from exc

    diag = np.real(np.diagonal(chol, axis1=-2, axis2=-1))
    value = 2.0 * np.sum(np.log2(diag), axis=-1)
    return float(value) if np.ndim(value) == 0 else value


def numerical_rank(m: np.ndarray, rtol: Optional[float] = None) -> int:
    """Singular values above rtol times the largest one."""
    m = np.atleast_2d(np.asarray(m))
    if m.size == 0:
        return 0
    if rtol is None:
        rtol = max(m.shape) * 1e-12

    s = np.linalg.svd(m, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > rtol * s[0]))


def eig_growth_count(
    r_lo: np.ndarray,
    r_hi: np.ndarray,
    power_ratio: float = DEFAULT_POWER_RATIO,
    growth_fraction: float = DEFAULT_GROWTH_FRACTION,
) -> int:
    """
    Count eigenvalues that scale with sigma^2.

    r_lo and r_hi are one covariance evaluated at sigma^2 and at
    power_ratio * sigma^2. Eigenvalues of the form eta*sigma^2 + a grow by
    roughly power_ratio, bounded ones by roughly 1.
    """
    r_lo = np.asarray(r_lo)
    r_hi = np.asarray(r_hi)
    if r_lo.shape != r_hi.shape or r_lo.ndim != 2 or r_lo.shape[0] != r_lo.shape[1]:
        raise ShapeMismatchError(
            f"covariances must be square and equal in shape: {r_lo.shape} vs {r_hi.shape}"
        )

    lo = np.linalg.eigvalsh(r_lo)
    hi = np.linalg.eigvalsh(r_hi)

    floor = np.finfo(float).eps * max(float(np.max(np.abs(hi), initial=0.0)), 1.0)
    ratio = np.divide(hi, lo, out=np.full_like(hi, np.inf), where=lo > floor)
    # an eigenvalue that is zero at both powers is not growing
    ratio[(lo <= floor) & (hi <= floor)] = 0.0

    return int(np.count_nonzero(ratio > growth_fraction * power_ratio))
