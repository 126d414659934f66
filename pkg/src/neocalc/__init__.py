"""Uncertainty-aware limits and derivatives for finite numerical data.

neocalc quantifies how far a real sequence is from converging and how far a
real function is from being differentiable, returning interval-valued
r-limit / r-derivative sets, defects and fuzzy membership grades instead of
a crash-or-converge answer.
"""

from .intervals import EMPTY, Interval, merge_intervals
from .sequences import (
    DEFAULT_BOUNDARY_TOL,
    DEFAULT_STABILITY_TOL,
    DEFAULT_TAIL_FRACTION,
    LimitReport,
    SequenceWindow,
    TailBounds,
    analyze_sequence,
    combine,
    fuzzy_converges,
    is_r_fundamental,
    is_r_limit,
    limit_defect,
    measure_of_convergence,
    membership_lim,
    r_limit_set,
    tail_bounds,
)
from .oracles import (
    DEFAULT_K_GRID,
    OracleVerdict,
    is_r_fundamental_direct,
    is_r_limit_direct,
    weak_quotient_limit_direct,
)
from .functions import (
    FunctionOracle,
    combine_oracles,
    gallery,
    gallery_list,
    oracle_from_samples,
    parse_gallery_spec,
)
from .derivatives import (
    ApproachMode,
    Classification,
    CombinedPrediction,
    DerivativeReport,
    ProfilePoint,
    QuotientBounds,
    ScaleLadder,
    classify,
    combine_reports,
    derivative_defect,
    dini_bounds,
    global_profile,
    membership_mu,
    quotient_samples,
    strong_set,
    weak_set,
)

__version__ = "0.1.0"

__all__ = [
    "EMPTY", "Interval", "merge_intervals",
    "SequenceWindow", "TailBounds", "LimitReport",
    "tail_bounds", "is_r_limit", "limit_defect", "r_limit_set",
    "measure_of_convergence", "is_r_fundamental", "fuzzy_converges",
    "membership_lim", "combine", "analyze_sequence",
    "DEFAULT_TAIL_FRACTION", "DEFAULT_STABILITY_TOL", "DEFAULT_BOUNDARY_TOL",
    "OracleVerdict", "is_r_limit_direct", "is_r_fundamental_direct",
    "weak_quotient_limit_direct", "DEFAULT_K_GRID",
    "FunctionOracle", "gallery", "gallery_list", "parse_gallery_spec",
    "oracle_from_samples", "combine_oracles",
    "ApproachMode", "Classification", "ScaleLadder", "QuotientBounds",
    "DerivativeReport", "ProfilePoint", "CombinedPrediction",
    "quotient_samples", "dini_bounds", "strong_set", "weak_set",
    "derivative_defect", "membership_mu", "classify", "combine_reports",
    "global_profile",
]
