"""Finite-field cross-check of the elliptic aspect model."""

from .agreement import AgreementReport, check_agreement
from .curve import CurveInstance, CurveSearchError, EllipticCurveFp, make_curve
from .riemann_roch import (
    DimMismatch,
    Realization,
    RRBasis,
    SectionSpace,
    exact_pair_agrees,
    exact_pair_oracle,
    realize,
    rr_space,
    section_space,
    verify_dim_table,
)

__all__ = [
    "AgreementReport",
    "check_agreement",
    "CurveInstance",
    "CurveSearchError",
    "DimMismatch",
    "EllipticCurveFp",
    "RRBasis",
    "Realization",
    "SectionSpace",
    "exact_pair_agrees",
    "exact_pair_oracle",
    "make_curve",
    "realize",
    "rr_space",
    "section_space",
    "verify_dim_table",
]
