from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from anecelab.capacity import CapacityCurve
from anecelab.model import CheckResult

SLOPE_ABS_TOL = 0.15
SLOPE_REL_TOL = 0.03


class DegenerateGridError(ValueError):
    pass


@dataclass(frozen=True)
class SlopeFit:
    """
    Least-squares line through a capacity curve.

    Attributes
    ----------
    slope: float
        Bits per unit of log2(sigma^2); the measured DoF.
    intercept: float
        Value of the line at log2(sigma^2) = 0.
    r_squared: float
        Coefficient of determination, in [0, 1].
    """

    slope: float
    intercept: float
    r_squared: float


def fit_line(x: Sequence[float], y: Sequence[float]) -> SlopeFit:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.size < 2:
        raise DegenerateGridError(f"need matching x and y with 2+ points, got {x.shape}, {y.shape}")
    if np.ptp(x) == 0.0:
        raise DegenerateGridError("all grid points are equal")

    slope, intercept = np.polyfit(x, y, 1)
    residual = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(np.sum(residual**2))
    r_squared = 1.0 if ss_tot == 0.0 else float(np.clip(1.0 - ss_res / ss_tot, 0.0, 1.0))
    return SlopeFit(slope=float(slope), intercept=float(intercept), r_squared=r_squared)


def fit_slope(curve: CapacityCurve) -> SlopeFit:
    return fit_line(curve.grid.points, curve.values)


def slope_tolerance(target: float) -> float:
    return max(SLOPE_ABS_TOL, SLOPE_REL_TOL * abs(target))


def verify_slope(
    name: str,
    curve: CapacityCurve,
    target_dof: int,
    tol: Optional[float] = None,
    control: bool = False,
) -> CheckResult:
    fit = fit_slope(curve)
    return CheckResult(
        name=name,
        measured=fit.slope,
        target=target_dof,
        tolerance=slope_tolerance(target_dof) if tol is None else tol,
        control=control,
    )
