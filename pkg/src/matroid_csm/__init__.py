"""Staircase classes and CSM cycles of matroids, computed exactly."""
from .chow import (
    ALL,
    PROPER,
    ChowContext,
    ChowElement,
    chow_context,
    degree,
    equal_in_ring,
    normalize,
    pairing_determinant,
    pairing_matrix,
)
from .csm import (
    IDENTITIES,
    coefficient_CF,
    contraction_embedding,
    csm_cycle,
    deletion_pullback,
    expand_staircase_bruteforce,
    rational_product_form,
    staircase,
    tsuv_partition,
    verify_identity,
    y_element,
)
from .fan import (
    MinkowskiWeight,
    PLFunction,
    bergman_cones,
    cap_by_degree,
    courant_divisor,
    is_balanced,
    modification_pullback,
    one_top,
    phi_function,
)
from .matroid import (
    Matroid,
    MatroidSpec,
    build_matroid,
    characteristic_polynomial,
    closure,
    contract,
    delete,
    flats_lattice,
    minor,
    rank,
)

__version__ = "0.1.0"

__all__ = [
    "ALL",
    "ChowContext",
    "ChowElement",
    "IDENTITIES",
    "Matroid",
    "MatroidSpec",
    "MinkowskiWeight",
    "PLFunction",
    "PROPER",
    "bergman_cones",
    "build_matroid",
    "cap_by_degree",
    "characteristic_polynomial",
    "chow_context",
    "closure",
    "coefficient_CF",
    "contract",
    "contraction_embedding",
    "courant_divisor",
    "csm_cycle",
    "degree",
    "delete",
    "deletion_pullback",
    "equal_in_ring",
    "expand_staircase_bruteforce",
    "flats_lattice",
    "is_balanced",
    "minor",
    "modification_pullback",
    "normalize",
    "one_top",
    "pairing_determinant",
    "pairing_matrix",
    "phi_function",
    "rank",
    "rational_product_form",
    "staircase",
    "tsuv_partition",
    "verify_identity",
    "y_element",
]
