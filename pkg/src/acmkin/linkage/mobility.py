"""Degree-of-freedom accounting for assembled linkages.

Internal mobility is what remains of the configuration space after quotienting
the ambient motion group; a linkage is locked when nothing remains. The
overconstraint inequality is purely structural (space dimensions and the
sharing pattern), so it applies even to diagrams with no configuration space.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class MobilityReport:
    total_dim: int
    group_dim: int
    internal_dof: int
    locked: bool
    overconstrained: bool

    def __str__(self):
        state = "locked" if self.locked else f"{self.internal_dof} internal dof"
        extra = ", overconstrained" if self.overconstrained else ""
        return (f"dim {self.total_dim} = {self.group_dim} rigid + "
                f"{self.internal_dof} internal ({state}{extra})")


def overconstrained(diagram, group_dim=3):
    """True when the actors cannot carry one rigid copy of the group plus
    the constraints shared between bodies:
    sum dim D(a)  <  group_dim + sum over multiply-owned c of dim D(c)."""
    sh = diagram.shape
    actor_total = sum(diagram.spaces[a].dim for a in sh.actors)
    shared_total = sum(diagram.spaces[c].dim for c in sh.constraints
                       if len(sh.owners(c)) >= 2)
    return actor_total < group_dim + shared_total


def mobility(diagram, limit, group_dim=3):
    """Mobility from a configuration space, or from an obstruction report
    whose local-dimension evidence is constant (e.g. the locked triangle)."""
    if limit.ok:
        total = limit.apex.dim
    else:
        est = limit.local_dims
        if est is None or not est.constant():
            raise ValueError("no configuration space and no constant "
                             "local dimension to read mobility from")
        total = est.values[0]
    dof = total - group_dim
    return MobilityReport(
        total_dim=total,
        group_dim=group_dim,
        internal_dof=dof,
        locked=dof == 0,
        overconstrained=overconstrained(diagram, group_dim),
    )


def three_bar_feasible(L1, L2, L3):
    """Triangle trichotomy for the pinned three-bar cycle: 'Feasible' when
    the strict triangle inequality holds, 'FeasibleDegenerate' on a tie
    (collinear assembly), 'Infeasible' otherwise."""
    sides = sorted((float(L1), float(L2), float(L3)))
    if any(s <= 0 for s in sides):
        raise ValueError("bar lengths must be positive")
    gap = sides[0] + sides[1] - sides[2]
    if gap > 0:
        return "Feasible"
    if gap == 0:
        return "FeasibleDegenerate"
    return "Infeasible"
