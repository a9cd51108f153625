"""Quantum post-measurement prediction and its classical conditional-probability counterpart."""

from .classical import JointTable
from .constants import EPS_ZERO, TAU_INDEP, TAU_NORM, TAU_RANK, TAU_STRUCT
from .correspondence import CorrespondenceReport, induce_table, uncorrelated_dependent_demo, verify_correspondence
from .errors import ContractViolation, DimensionMismatch, ZeroProbabilityError
from .linalg import CompositeSpace, Operator, Projector, StateVector
from .quantum import EntangledPairSpec, EventPair, ObservableSpec

__all__ = [
    "CompositeSpace",
    "ContractViolation",
    "CorrespondenceReport",
    "DimensionMismatch",
    "EPS_ZERO",
    "EntangledPairSpec",
    "EventPair",
    "JointTable",
    "ObservableSpec",
    "Operator",
    "Projector",
    "StateVector",
    "TAU_INDEP",
    "TAU_NORM",
    "TAU_RANK",
    "TAU_STRUCT",
    "ZeroProbabilityError",
    "induce_table",
    "uncorrelated_dependent_demo",
    "verify_correspondence",
]
