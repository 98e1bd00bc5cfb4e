from .algebra import (
    MODELS,
    LieAlgebraModel,
    SubalgebraSearch,
    is_subalgebra,
    se2,
    se3,
    search_subalgebras,
    so3,
)
from .group import (
    GROUPS,
    SE2Model,
    SE3Model,
    group_model,
    left_action,
    line_action,
    plane_action,
    rotation_about,
    rotation_only_action,
)
from .pairs import (
    OBSTRUCTION_SE2,
    OBSTRUCTION_SLIDING_HINGE,
    OBSTRUCTION_SO3,
    MotionSet,
    PairNormalForm,
    Realizability,
    SubgroupVerdict,
    cylindrical_projection,
    forced_translation_plane,
    motion_set_subgroup_check,
    pair_normal_form,
    realizable_as_pair,
)

__all__ = [
    "GROUPS",
    "MODELS",
    "OBSTRUCTION_SE2",
    "OBSTRUCTION_SLIDING_HINGE",
    "OBSTRUCTION_SO3",
    "LieAlgebraModel",
    "MotionSet",
    "PairNormalForm",
    "Realizability",
    "SE2Model",
    "SE3Model",
    "SubalgebraSearch",
    "SubgroupVerdict",
    "cylindrical_projection",
    "forced_translation_plane",
    "group_model",
    "is_subalgebra",
    "left_action",
    "line_action",
    "motion_set_subgroup_check",
    "pair_normal_form",
    "plane_action",
    "realizable_as_pair",
    "rotation_about",
    "rotation_only_action",
    "se2",
    "se3",
    "search_subalgebras",
    "so3",
]
