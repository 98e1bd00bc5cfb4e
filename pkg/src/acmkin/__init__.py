"""acmkin: compositional kinematics over embedded smooth manifolds.

Open linkages are modelled as diagrams of actor manifolds tied together by
shared constraint manifolds; configuration spaces are computed by welding
interacting pairs down to a single actor, with structural decision procedures
for decomposability, overconstraint, locking, and two-actor realizability.
"""

__version__ = "0.1.0"

from .expr import BACKEND as KERNEL_BACKEND  # noqa: F401
