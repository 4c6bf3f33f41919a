from .compare import (
    COMPARISON_COLUMNS,
    ComparisonRow,
    ComparisonTable,
    SessionBudgetError,
    compare_schemes,
)
from .fit import DegenerateGridError, SlopeFit, fit_line, fit_slope, verify_slope
from .runner import all_as_expected, apply_tamper, run_checks, run_suite
from .suites import (
    IDENTITY_MANIFEST,
    IdentityGrid,
    eig_growth_suite,
    identity_control,
    identity_suite,
    rank_oracle_suite,
)

__all__ = [
    "COMPARISON_COLUMNS",
    "ComparisonRow",
    "ComparisonTable",
    "DegenerateGridError",
    "IDENTITY_MANIFEST",
    "IdentityGrid",
    "SessionBudgetError",
    "SlopeFit",
    "all_as_expected",
    "apply_tamper",
    "compare_schemes",
    "eig_growth_suite",
    "fit_line",
    "fit_slope",
    "identity_control",
    "identity_suite",
    "rank_oracle_suite",
    "run_checks",
    "run_suite",
    "verify_slope",
]
