"""Stacked color codes: construction, code switching and transversal T checks."""

from .distance import DistanceQuery, DistanceResult, min_weight_logical
from .errors import (
    BudgetExceeded,
    DimensionError,
    IncompleteTranscriptError,
    InfeasibleError,
    ProjectionError,
    ProtocolError,
    VerificationError,
)
from .gates import (
    RotationVector,
    find_S_rotation,
    lift_T_rotation,
    recursive_lift,
    verify_S_conditions,
    verify_T_action,
)
from .lattice import HexColorCode, build_hex_color_code, validate_code
from .pauli import PauliOperator, StabilizerCode, StabilizerGroup, canonical_form, commutes, measure
from .stacked import StackedCode, build_stacked_code, dual_lattice, unfold_layout, validate_stacked
from .switching import switch_down, switch_up

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "DimensionError",
    "DistanceQuery",
    "DistanceResult",
    "HexColorCode",
    "IncompleteTranscriptError",
    "InfeasibleError",
    "PauliOperator",
    "ProjectionError",
    "ProtocolError",
    "RotationVector",
    "StabilizerCode",
    "StabilizerGroup",
    "StackedCode",
    "VerificationError",
    "build_hex_color_code",
    "build_stacked_code",
    "canonical_form",
    "commutes",
    "dual_lattice",
    "find_S_rotation",
    "lift_T_rotation",
    "measure",
    "min_weight_logical",
    "recursive_lift",
    "switch_down",
    "switch_up",
    "unfold_layout",
    "validate_code",
    "validate_stacked",
    "verify_S_conditions",
    "verify_T_action",
]
