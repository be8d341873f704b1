"""Algebraic-geometry codes on rational surfaces over small finite fields.

Builds evaluation codes on an elliptic quadric and on two blow-ups of the
projective plane, brackets or computes their minimum distance, and checks the
results against a stored table of expected parameters.
"""

from .bounds import BoundResult, OutOfRangeError, construction_lower_bound
from .codes import (
    construct_custom,
    EvaluationCode,
    ParamReport,
    build_code,
    construct,
    determine_distance,
    report,
    witness_max_curve,
)
from .field import GF, field_of_order
from .geometry import HomogeneousForm, count_curve_points

__version__ = "0.1.0"

__all__ = [
    "BoundResult",
    "EvaluationCode",
    "GF",
    "HomogeneousForm",
    "OutOfRangeError",
    "ParamReport",
    "build_code",
    "construct",
    "construct_custom",
    "construction_lower_bound",
    "count_curve_points",
    "determine_distance",
    "field_of_order",
    "report",
    "witness_max_curve",
]
