"""Linear maps on complex matrix space that preserve fixed Lie or Jordan products.

Build canonical maps ``A -> c U A U^-1 (+ eta(A) I)`` and their transpose
variants, check the preserver hypotheses and their consequences numerically,
and recover the canonical data from an opaque map.
"""
from .canonical import decompose_full, decompose_jordan, decompose_traceless, recover_scale
from .core import DEFAULT_TOL, Tolerances
from .mapspace import (
    CanonicalForm,
    MatrixSpaceMap,
    TracelessMap,
    apply,
    canonical_map,
    invert_map,
    restrict_to_traceless,
    with_trace_functional,
)
from .preserver import (
    CheckReport,
    anticommuting_involution,
    check_centralizer_inclusion,
    check_equal_squares,
    check_fixed_product_preserver,
    check_idempotent_identities,
    check_polarized_preserver,
    check_rank_one_traceless_image,
    check_square_zero_preservation,
    companion_root,
    derive_d2,
    inverse_polarization,
    polarization_transfer,
)
from .products import (
    WitnessPair,
    ad_operator,
    centralizer_basis,
    jordan_product,
    lie_bracket,
    solve_bracket_equation,
    witness_family,
)

# the operation list names it this way
idempotent_identity_check = check_idempotent_identities

__version__ = "0.1.0"
