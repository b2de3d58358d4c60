"""Cox-ring combinatorics: gradings, restriction to a fan, sections."""

from .diagram import (
    BadComponent,
    DirectImage,
    DirectImageTerm,
    IsotypicDecomposition,
    RestrictionDiagram,
    bad_locus,
    direct_image_formula,
    isotypic,
    k_exponents,
    restriction_diagram,
)
from .grading import (
    GradingData,
    RaySet,
    SaturationResult,
    build_grading,
    equivalence_classes,
    grading_of_fan,
    verify_primitive_saturation,
)
from .polytope import bounding_box, lattice_points
from .sections import (
    GradedPiece,
    InvariantMonomial,
    global_section_points,
    graded_piece_basis,
    invariant_monomial_correspondence,
    section_monomials,
)

__all__ = [
    "BadComponent", "DirectImage", "DirectImageTerm", "GradedPiece", "GradingData",
    "InvariantMonomial", "IsotypicDecomposition", "RaySet", "RestrictionDiagram",
    "SaturationResult", "bad_locus", "bounding_box", "build_grading",
    "direct_image_formula", "equivalence_classes", "global_section_points",
    "graded_piece_basis", "grading_of_fan", "invariant_monomial_correspondence",
    "isotypic", "k_exponents", "lattice_points", "restriction_diagram",
    "section_monomials", "verify_primitive_saturation",
]
