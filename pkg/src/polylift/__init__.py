"""Exact polyhedral computations: polars, D-sets, slack matrices, cone factorizations and lifts."""

from .errors import PolyliftError
from .factorization import (
    PSD,
    Factorization,
    NonnegOrthant,
    block_augmentation_bound,
    nn_rank_decide,
    nn_search,
    orthant_factorization,
    psd_rank_lower_bound,
    psd_verify_family,
    rectangle_cover_bound,
    shitov_report,
    verify_factorization,
)
from .lift import (
    Lift,
    build_cone_lift,
    build_lift,
    build_lift_with_lines,
    eliminate_presentation,
    verify_lift,
)
from .linalg import AffineSubspace, exact_rank, row_space_basis, solve_affine, subspace_equal
from .polar import PolarData, barrier_cone, compute_d_sets, membership_by_d, polar_set, support_value
from .polyhedron import (
    HRep,
    Polyhedron,
    VRep,
    contains_point,
    decompose_lines,
    h_to_v,
    is_translated_cone,
    lineality_space,
    linear_image,
    polyhedra_equal,
    recession_cone,
    v_to_h,
)
from .scalar import QuadScalar, parse_scalar, format_scalar, sqrt
from .slack import (
    SlackMatrix,
    build_slack,
    canonical_slack,
    check_rank_theorem,
    is_slack_matrix,
    pointed_reduction,
)

__version__ = "0.1.0"
