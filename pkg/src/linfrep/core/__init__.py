"""
Core exact algebra: graded spaces, L∞-algebras, Poisson structures,
representations, braidings and Chevalley-Eilenberg algebras.
"""

from .errors import (
    DegreeError, InstanceFormatError, LinfrepError, ParityMismatchError, ShapeMismatchError, ShiftError,
    SpaceMismatchError,
)
from .graded import GradedElement, GradedSpace, TensorSpace, UNIT
from .linfty import LInfinityAlgebra, PolyMap, SkewMultiMap, check_jacobi
from .poisson import ShiftedPoissonStructure, check_mc
from .repcat import Intertwiner, Representation, adjoint_rep, hom_differential, is_representation
from .braiding import build_braiding_data, certify
from .ce import build_ce_algebra, build_ce_module, check_equivalence_suite

__all__ = [
    # Errors
    "LinfrepError",
    "ShapeMismatchError",
    "DegreeError",
    "SpaceMismatchError",
    "ParityMismatchError",
    "ShiftError",
    "InstanceFormatError",

    # Graded linear algebra
    "GradedSpace",
    "TensorSpace",
    "GradedElement",
    "UNIT",

    # Algebras and structures
    "LInfinityAlgebra",
    "SkewMultiMap",
    "PolyMap",
    "ShiftedPoissonStructure",
    "check_jacobi",
    "check_mc",

    # Representations
    "Intertwiner",
    "Representation",
    "adjoint_rep",
    "hom_differential",
    "is_representation",

    # Braiding and CE
    "build_braiding_data",
    "certify",
    "build_ce_algebra",
    "build_ce_module",
    "check_equivalence_suite",
]
