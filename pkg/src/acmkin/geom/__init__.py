from .products import FiberProduct, fiber_product, product
from .smoothmap import SmoothMap, coordinate_restriction, identity_map, tuple_map
from .solve import (
    as_rng,
    preimage_point,
    sample_point,
    sample_points,
    solve_feasible,
)
from .space import (
    SOLVE_TOL,
    FeasiblePoint,
    Space,
    circle,
    euclidean,
    line_space,
    plane,
    point_space,
    se2_space,
    se3_space,
    slide_space,
)
from .submersion import (
    FD_STEP,
    RANK_REL_TOL,
    DimensionObstructed,
    LocalDimEstimate,
    RankDeficientWitness,
    SampledVerified,
    check_surjective_submersion,
    differential_rank,
    fd_jacobian,
    local_dimension_estimate,
    numerical_rank,
    tangent_basis,
)

__all__ = [
    "FD_STEP",
    "RANK_REL_TOL",
    "SOLVE_TOL",
    "DimensionObstructed",
    "FeasiblePoint",
    "FiberProduct",
    "LocalDimEstimate",
    "RankDeficientWitness",
    "SampledVerified",
    "SmoothMap",
    "Space",
    "as_rng",
    "check_surjective_submersion",
    "circle",
    "coordinate_restriction",
    "differential_rank",
    "euclidean",
    "fd_jacobian",
    "fiber_product",
    "identity_map",
    "line_space",
    "local_dimension_estimate",
    "numerical_rank",
    "plane",
    "point_space",
    "preimage_point",
    "product",
    "sample_point",
    "sample_points",
    "se2_space",
    "se3_space",
    "slide_space",
    "solve_feasible",
    "tangent_basis",
    "tuple_map",
]
