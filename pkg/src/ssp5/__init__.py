"""Superspecial hyperelliptic genus-5 curves with automorphism group containing C2^3.

Library + CLI that enumerates, up to isomorphism over the algebraic closure,
all such curves in characteristic p > 11, and independently verifies every
result with a Cartier-Manin matrix oracle.
"""

from .field import INF, FieldTower, InputError, build_field_tower, is_prime
from .poly import Poly, poly_roots
from .curve import (
    GroupTag,
    HyperCurve,
    branch_set,
    canonical_key,
    full_automorphism_type,
    hasse_witt_matrix,
    is_superspecial,
    mobius_to_standard,
    parse_curve,
    reduced_automorphisms,
)
from .ssj import (
    SupersingularSet,
    enumerate_supersingular_j,
    hasse_polynomial,
    is_supersingular_j,
    j_from_four_points,
    j_from_legendre,
)

__version__ = "0.1.0"

__all__ = [
    "INF",
    "FieldTower",
    "GroupTag",
    "HyperCurve",
    "InputError",
    "Poly",
    "SupersingularSet",
    "__version__",
    "branch_set",
    "build_field_tower",
    "canonical_key",
    "enumerate_supersingular_j",
    "full_automorphism_type",
    "hasse_polynomial",
    "hasse_witt_matrix",
    "is_prime",
    "is_superspecial",
    "is_supersingular_j",
    "j_from_four_points",
    "j_from_legendre",
    "mobius_to_standard",
    "parse_curve",
    "poly_roots",
    "reduced_automorphisms",
]
