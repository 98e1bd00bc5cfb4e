from .catalog import (
    CATALOG,
    CatalogEntry,
    build_catalog,
    cylindrical,
    linked_revolutes,
    nonexample,
    pendulum,
    revolute,
    rigid_bar,
    slider,
    sliding_hinge,
    three_bar,
)
from .daemon import Daemon, DaemonSlice, daemon_slice
from .mobility import MobilityReport, mobility, overconstrained, three_bar_feasible

__all__ = [
    "CATALOG",
    "CatalogEntry",
    "Daemon",
    "DaemonSlice",
    "MobilityReport",
    "build_catalog",
    "cylindrical",
    "daemon_slice",
    "linked_revolutes",
    "mobility",
    "nonexample",
    "overconstrained",
    "pendulum",
    "revolute",
    "rigid_bar",
    "slider",
    "sliding_hinge",
    "three_bar",
    "three_bar_feasible",
]
