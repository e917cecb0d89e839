"""Alignment kernels: scalar reference implementations and the striped
lane-parallel local kernel with saturation escalation."""

from .result import (
    AlignmentMode,
    AlignmentResult,
    Cigar,
    cigar_from_string,
    cigar_to_string,
    cigar_validate,
    empty_result,
    ops_to_cigar,
    score_from_cigar,
)
from .scalar import banded_traceback, nw_scalar, sg_scalar, sw_scalar
from .striped import (
    AlignContext,
    KernelOutcome,
    QueryProfile,
    align_full,
    build_profile,
    locate_begin,
    sw_striped_score,
)

__all__ = [
    "AlignmentMode",
    "AlignmentResult",
    "Cigar",
    "cigar_from_string",
    "cigar_to_string",
    "cigar_validate",
    "empty_result",
    "ops_to_cigar",
    "score_from_cigar",
    "banded_traceback",
    "nw_scalar",
    "sg_scalar",
    "sw_scalar",
    "AlignContext",
    "KernelOutcome",
    "QueryProfile",
    "align_full",
    "build_profile",
    "locate_begin",
    "sw_striped_score",
]
