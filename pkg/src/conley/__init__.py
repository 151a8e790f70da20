"""Connection matrices and persistence for combinatorial multivector fields."""

from .complex import InvariantError, SimplicialComplex, build_complex, closure, star
from .mvf import (FieldBuilder, MultivectorField, connection_probability, is_convex,
                  merge_vectors, singleton_field, validate_field)
from .morse import (FilteredOrder, MorseDecomposition, filtered_order, is_morse_set,
                    minimum_morse_decomposition)
from .z2matrix import FilteredMatrix, boundary_matrix
from .reduce import (ConnectionMatrix, ReductionTimeout, check_reduced, complete_reduction,
                     conmat, connectmat, morse_fixed_compare, permutation_equivalent)
from .persist import (Bar, Barcode, LyapunovFunction, bottleneck_distance, conley_persistence,
                      downset_function, f_compatible_order, morse_persistence,
                      persistence_equivalence_check)

__all__ = [
    "Bar", "Barcode", "ConnectionMatrix", "FieldBuilder", "FilteredMatrix", "FilteredOrder",
    "InvariantError", "LyapunovFunction", "MorseDecomposition", "MultivectorField",
    "ReductionTimeout", "SimplicialComplex", "bottleneck_distance", "boundary_matrix",
    "build_complex", "check_reduced", "closure", "complete_reduction", "conley_persistence",
    "conmat", "connection_probability", "connectmat", "downset_function", "f_compatible_order",
    "filtered_order", "is_convex", "is_morse_set", "merge_vectors", "minimum_morse_decomposition",
    "morse_fixed_compare", "morse_persistence", "permutation_equivalent",
    "persistence_equivalence_check", "singleton_field", "star", "validate_field",
]
