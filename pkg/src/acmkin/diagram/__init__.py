from .shape import STAR, ActorIndexCategory, Skeleton, build_shape
from .acm import (
    ACMDiagram,
    AxiomCheck,
    DecompositionReport,
    Interaction,
    ValidationReport,
)
from .sub import Inclusion, SubdiagramSpec, intersect, restrict_diagram, union_over
from .manifest import (
    SCHEMA,
    DaemonSpec,
    MotionSpec,
    dumps,
    from_manifest,
    loads,
    to_manifest,
)

__all__ = [
    "STAR",
    "ActorIndexCategory",
    "Skeleton",
    "build_shape",
    "ACMDiagram",
    "AxiomCheck",
    "DecompositionReport",
    "Interaction",
    "ValidationReport",
    "Inclusion",
    "SubdiagramSpec",
    "intersect",
    "restrict_diagram",
    "union_over",
    "SCHEMA",
    "DaemonSpec",
    "MotionSpec",
    "dumps",
    "from_manifest",
    "loads",
    "to_manifest",
]
