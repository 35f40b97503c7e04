"""Numerical tools for approximate Birkhoff-James orthogonality in finite-dimensional normed spaces."""

__version__ = "0.1.0"

from .auerbach import AuerbachBasis, auerbach_basis, verify_property_star  # noqa: E402
from .exceptions import (ArgumentError, CapacityError, DegenerateBoundError,  # noqa: E402
                         DegenerateError, NonConvergenceError, OrthoError,
                         SamplingExhaustedError, UnsupportedDimensionError)
from .normed_space import NormedSpace, SupportSet, parse_matrix, parse_space, parse_vector  # noqa: E402
from .operators import (LinearOperator, bounded_below_floor, isometry_deviation,  # noqa: E402
                        isometry_eta_bound, local_preservation_constant,
                        local_reversal_constant, lower_bound, operator_norm,
                        perturbed_eta_bound, preservation_constant, reversal_constant,
                        verify_floor)
from .orthogonality import (BIRKHOFF, ISOSCELES, ROBERTS, UNIT_ISOSCELES, Relation,  # noqa: E402
                            beps_to_deps, chmielinski, dragomir, dragomir_eps, dual_check,
                            holds, min_gap, sample_ortho_pairs)

__all__ = [
    "__version__", "AuerbachBasis", "auerbach_basis", "verify_property_star",
    "ArgumentError", "CapacityError", "DegenerateBoundError", "DegenerateError",
    "NonConvergenceError", "OrthoError", "SamplingExhaustedError", "UnsupportedDimensionError",
    "NormedSpace", "SupportSet", "parse_matrix", "parse_space", "parse_vector",
    "LinearOperator", "bounded_below_floor", "isometry_deviation", "isometry_eta_bound",
    "local_preservation_constant", "local_reversal_constant", "lower_bound", "operator_norm",
    "perturbed_eta_bound", "preservation_constant", "reversal_constant", "verify_floor",
    "BIRKHOFF", "ISOSCELES", "ROBERTS", "UNIT_ISOSCELES", "Relation", "beps_to_deps",
    "chmielinski", "dragomir", "dragomir_eps", "dual_check", "holds", "min_gap",
    "sample_ortho_pairs",
]
