"""Certify, evaluate and probe best constants in Hardy-, Copson- and Carleman-type inequalities."""

from .certify import Certificate, beta_search, certify_constant, heuristic_gamma, s_value, thm5_consistency
from .dual import dualize_statement, transpose_norm_check
from .errors import (
    DivergenceError,
    DomainError,
    HardyError,
    InvalidRegionError,
    OutOfRangeError,
    RegimeError,
    SearchError,
)
from .operators import Direction, Normalizer, SequenceVector, TailOperator, apply, ratio_functional
from .probe import ProbeResult, extremal_sweep, n_sweep, optimize_ratio
from .statements import StatementId, closed_constant, statement, validity_region
from .weights import HeadPowerDiff, PowerDiffRemainder, PurePower, Tabulated

__version__ = "0.1.0"

__all__ = [
    "Certificate", "Direction", "DivergenceError", "DomainError", "HardyError", "HeadPowerDiff",
    "InvalidRegionError", "Normalizer", "OutOfRangeError", "PowerDiffRemainder", "ProbeResult",
    "PurePower", "RegimeError", "SearchError", "SequenceVector", "StatementId", "Tabulated",
    "TailOperator", "apply", "beta_search", "certify_constant", "closed_constant",
    "dualize_statement", "extremal_sweep", "heuristic_gamma", "n_sweep", "optimize_ratio",
    "ratio_functional", "s_value", "statement", "thm5_consistency", "transpose_norm_check",
    "validity_region",
]
