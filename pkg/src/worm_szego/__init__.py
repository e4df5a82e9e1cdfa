"""
Public API for worm-szego.

Numerical evaluation of the Szegő kernel of the non-smooth worm domain
D'_beta: the kernel and its first derivatives by three independent routes,
the residue/contour split into an explicit leading term and a decaying
remainder, boundary blow-up analysis against the Bergman denominator
templates, and a boundary-pairing check of the reproducing property.
"""

from __future__ import annotations

from .analysis import (
    ComparisonReport,
    SingularFactor,
    Term,
    TermActivation,
    classify,
    compare_orders,
    factor_values,
    fit_blowup,
    fit_corner,
)
from .domain import (
    ApproachPath,
    BoundaryFace,
    DomainParams,
    Face,
    TauLambda,
    contains,
    face_point,
    make_params,
    make_path,
    reduce,
    retreat,
    sample_interior,
)
from .errors import (
    BetaOutOfRange,
    FitUnstable,
    HOutOfRange,
    OutsideDomain,
    PathLeavesDomain,
    SeriesDiverged,
    ToleranceNotMet,
    WormSzegoError,
)
from .fits import CornerFit, ExponentFit, fit_exponent
from .reproducing import PairingResult, ReproduceResult, TestFunction, pair, reproduce_check, theta_coefficient
from .szego import (
    KernelValue,
    LeadingTerm,
    Route,
    Var,
    kernel,
    kernel_derivative,
    kernel_derivative_value,
    leading_decay,
    leading_term,
    remainder,
    remainder_decay,
)

__all__ = [
    "ApproachPath",
    "BetaOutOfRange",
    "BoundaryFace",
    "ComparisonReport",
    "CornerFit",
    "DomainParams",
    "ExponentFit",
    "Face",
    "FitUnstable",
    "HOutOfRange",
    "KernelValue",
    "LeadingTerm",
    "OutsideDomain",
    "PairingResult",
    "PathLeavesDomain",
    "ReproduceResult",
    "Route",
    "SeriesDiverged",
    "SingularFactor",
    "TauLambda",
    "Term",
    "TermActivation",
    "TestFunction",
    "ToleranceNotMet",
    "Var",
    "WormSzegoError",
    "classify",
    "compare_orders",
    "contains",
    "face_point",
    "factor_values",
    "fit_blowup",
    "fit_corner",
    "fit_exponent",
    "kernel",
    "kernel_derivative",
    "kernel_derivative_value",
    "leading_decay",
    "leading_term",
    "make_params",
    "make_path",
    "pair",
    "reduce",
    "remainder",
    "remainder_decay",
    "reproduce_check",
    "retreat",
    "sample_interior",
    "theta_coefficient",
]
