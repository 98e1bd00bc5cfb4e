from .weld import WeldStep, weld
from .flimit import (
    ConfigurationSpace,
    ObstructionReport,
    OrderInvarianceReport,
    PreimageLeg,
    ReductionChain,
    configuration_space,
    enumerate_weld_orders,
    f_limit,
    raw_equalizer,
    reduce_acyclic,
    replay_order,
    weld_order_invariance_check,
)
from .rigid import (
    ACMSystem,
    AddActorStep,
    AddConstraintStep,
    IsoStep,
    IsoWitness,
    RigidInclusion,
    apply_step,
    classify,
    compose_rigid,
    identity_rigid,
    include_subsystem,
    iso_witness,
    same_diagram,
)

__all__ = [
    "WeldStep",
    "weld",
    "ConfigurationSpace",
    "ObstructionReport",
    "OrderInvarianceReport",
    "PreimageLeg",
    "ReductionChain",
    "configuration_space",
    "enumerate_weld_orders",
    "f_limit",
    "raw_equalizer",
    "reduce_acyclic",
    "replay_order",
    "weld_order_invariance_check",
    "ACMSystem",
    "AddActorStep",
    "AddConstraintStep",
    "IsoStep",
    "IsoWitness",
    "RigidInclusion",
    "apply_step",
    "classify",
    "compose_rigid",
    "identity_rigid",
    "include_subsystem",
    "iso_witness",
    "same_diagram",
]
