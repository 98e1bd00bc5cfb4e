"""Motion sets, subgroup checks, and homogeneous-pair normal forms.

A two-actor realization question comes down to: is the relative motion set
a closed subgroup, and does a subalgebra of the right dimension (and
compactness) exist? The normal form Phi(g1, g2) = (g2, g2^-1 g1 g0) turns
the pair fiber product into G x H once both projections are equivariant
submersions onto a common homogeneous space.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import NotEquivariant, NotTransitive, SolveDiverged
from ..geom import (
    RANK_REL_TOL,
    SmoothMap,
    line_space,
    preimage_point,
    sample_points,
    se3_space,
)
from .algebra import is_subalgebra, se2 as se2_algebra, so3, search_subalgebras
from .group import SE3Model, group_model, line_action, rotation_about

OBSTRUCTION_SO3 = "no 2-dim subalgebra of so(3)"
OBSTRUCTION_SE2 = "only 2-dim subalgebra of se(2) is translations"
OBSTRUCTION_SLIDING_HINGE = "sliding-hinge set not closed under multiplication"


@dataclass
class MotionSet:
    """A subset of a motion group: declared subgroup, sliding hinge set,
    abstract 2-torus, or the cylindrical axis set."""

    group: str  # "SE2" | "SE3"
    kind: str  # "subgroup" | "sliding_hinge" | "torus2" | "cylindrical"
    params: dict = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        if self.kind not in ("subgroup", "sliding_hinge", "torus2", "cylindrical"):
            raise ValueError(f"unknown motion-set kind {self.kind!r}")
        if self.kind == "sliding_hinge":
            u_h = np.asarray(self.params["u_h"], dtype=np.float64)
            u_s = np.asarray(self.params["u_s"], dtype=np.float64)
            if abs(np.linalg.norm(u_h) - 1) > 1e-9 or abs(np.linalg.norm(u_s) - 1) > 1e-9:
                raise ValueError("sliding hinge axes must be unit vectors")
            if abs(u_h @ u_s) > 1e-9:
                raise ValueError("sliding hinge axes must be orthogonal")
        if self.kind == "cylindrical" and "axis" in self.params:
            axis = np.asarray(self.params["axis"], dtype=np.float64)
            if abs(np.linalg.norm(axis) - 1) > 1e-9:
                raise ValueError("cylindrical axis must be a unit vector")


@dataclass
class SubgroupVerdict:
    is_subgroup: bool
    detail: str
    witness: tuple = None  # (g1, g2, product, distance) when not a subgroup

    def __str__(self):
        return self.detail


def _hinge_distance(g, u_h, u_s):
    a, R = SE3Model.split(g)
    trans = np.linalg.norm(a - (a @ u_s) * u_s)
    rot = np.linalg.norm(R @ u_h - u_h)
    return trans + rot


def motion_set_subgroup_check(mset, n_samples=20, seed=0, tol=1e-9):
    """Closure evidence for the set; exact witness for the sliding hinge."""
    if mset.kind == "torus2":
        return SubgroupVerdict(True, "abstract 2-torus (group by definition)")
    if mset.kind == "subgroup":
        basis = mset.params.get("basis", ())
        if basis:
            model = group_model(mset.group).algebra
            if not is_subalgebra(model, basis):
                return SubgroupVerdict(False, "declared basis not bracket-closed")
            return SubgroupVerdict(True, f"bracket-closed basis of dim {len(basis)}")
        return SubgroupVerdict(True, "trivial subgroup")
    se3 = SE3Model()
    if mset.kind == "cylindrical":
        v0 = np.asarray(mset.params["axis"], dtype=np.float64)
        rng = np.random.default_rng(seed)

        def elem(t, theta):
            return se3.join(t * v0, rotation_about(v0, theta))

        def dist(g):
            a, R = se3.split(g)
            return (np.linalg.norm(a - (a @ v0) * v0)
                    + np.linalg.norm(R @ v0 - v0))

        worst = 0.0
        for _ in range(n_samples):
            g = elem(rng.normal(), rng.uniform(-np.pi, np.pi))
            h = elem(rng.normal(), rng.uniform(-np.pi, np.pi))
            worst = max(worst, dist(se3.mul(g, h)), dist(se3.inv(g)))
        if worst <= tol:
            return SubgroupVerdict(True, f"closed under sampled products "
                                         f"(max distance {worst:.2e})")
        return SubgroupVerdict(False, f"sampled product left the set "
                                      f"(distance {worst:.2e})")
    # sliding hinge: the lemma's explicit witness
    u_h = np.asarray(mset.params["u_h"], dtype=np.float64)
    u_s = np.asarray(mset.params["u_s"], dtype=np.float64)
    g1 = se3.join(u_s, rotation_about(u_h, np.pi / 2))
    g2 = se3.join(u_s, np.eye(3))
    prod = se3.mul(g1, g2)
    d = _hinge_distance(prod, u_h, u_s)
    return SubgroupVerdict(False,
                           f"(u_s, R(pi/2)) * (u_s, I) leaves the set "
                           f"(distance {d:.3f})",
                           witness=(g1, g2, prod, d))


def forced_translation_plane(u_h, u_s, n_angles=8):
    """Translation directions generated by conjugating one slide by the
    hinge rotations; returns (rank, directions). Rank 2 spanning u_h^perp
    shows closure forces the whole translation plane."""
    se3 = SE3Model()
    u_h = np.asarray(u_h, dtype=np.float64)
    slide = se3.join(np.asarray(u_s, dtype=np.float64), np.eye(3))
    dirs = []
    for theta in np.linspace(0.0, 2 * np.pi, n_angles, endpoint=False):
        rot = se3.join(np.zeros(3), rotation_about(u_h, theta))
        conj = se3.mul(se3.mul(rot, slide), se3.inv(rot))
        a, R = se3.split(conj)
        if np.linalg.norm(R - np.eye(3)) > 1e-12:
            raise AssertionError("conjugate of a translation is not a translation")
        if abs(a @ u_h) > 1e-12:
            raise AssertionError("conjugated direction left u_h^perp")
        dirs.append(a)
    dirs = np.array(dirs)
    return int(np.linalg.matrix_rank(dirs, tol=1e-10)), dirs


# -- pair normal forms --------------------------------------------------------


@dataclass
class PairNormalForm:
    group: str
    H_basis: np.ndarray  # (dim, H_dim) columns in algebra coefficients
    H_dim: int
    g0: np.ndarray
    phi: callable  # (g1, g2) -> (g2, g2^-1 g1 g0)
    phi_inv: callable  # (g, h) -> (g h g0^-1, g)
    evidence: dict

    @property
    def pair_dim(self):
        return self.evidence["group_dim"] + self.H_dim

    def __repr__(self):
        return f"PairNormalForm({self.group}, H_dim={self.H_dim})"


def pair_normal_form(model, p1, p2, action, n_samples=20, seed=0, tol=1e-9):
    """Normal form of the pair fiber product P = {(g1,g2): p1(g1)=p2(g2)}.

    Checks (sampled): p1/p2 equivariance for `action`, transitivity via
    preimage coverage; returns H = ker dp2|_e, g0 with p2(g0) = p1(e), and
    the mutually inverse equivariant maps.
    """
    rng = np.random.default_rng(seed)
    for label, p in (("p1", p1), ("p2", p2)):
        for _ in range(n_samples):
            g = model.random(rng)
            k = model.random(rng)
            lhs = p(model.mul(k, g))
            rhs = action(k, p(g))
            if np.max(np.abs(lhs - rhs)) > tol:
                raise NotEquivariant(
                    f"{label} is not equivariant (deviation "
                    f"{np.max(np.abs(lhs - rhs)):.2e})"
                )
    try:
        for fp in sample_points(p2.target, 5, rng):
            preimage_point(p2, fp.x, rng)
    except SolveDiverged as exc:
        raise NotTransitive(f"target point outside the image of p2: {exc}") from exc

    e = model.identity
    m1, m2 = p1(e), p2(e)
    g0 = preimage_point(p2, m1, rng).x

    T = model.tangent_at_identity()
    _, J = p2.jacobian(e)
    D = J @ T
    u, svals, vt = np.linalg.svd(D)
    cut = (RANK_REL_TOL * svals[0]) if svals.size and svals[0] > 0 else 0.0
    rank = int(np.sum(svals > cut))
    H_basis = vt[rank:].T  # (algebra dim, H_dim)
    h_dim = H_basis.shape[1]
    if h_dim and not is_subalgebra(model.algebra, H_basis.T, tol=1e-8):
        raise AssertionError("stabilizer tangent is not bracket-closed")

    def phi(g1, g2):
        return g2, model.mul(model.inv(g2), model.mul(g1, g0))

    g0_inv = model.inv(g0)

    def phi_inv(g, h):
        return model.mul(model.mul(g, h), g0_inv), g

    worst_round, worst_equiv, worst_fiber = 0.0, 0.0, 0.0
    for _ in range(n_samples):
        g1 = model.random(rng)
        g2 = preimage_point(p2, p1(g1), rng).x
        g, h = phi(g1, g2)
        worst_fiber = max(worst_fiber, float(np.max(np.abs(p2(h) - m2))))
        b1, b2 = phi_inv(g, h)
        worst_round = max(worst_round,
                          float(np.max(np.abs(b1 - g1))),
                          float(np.max(np.abs(b2 - g2))))
        gg, hh = phi(*phi_inv(g1, g2))  # also check the other composite
        worst_round = max(worst_round,
                          float(np.max(np.abs(gg - g1))),
                          float(np.max(np.abs(hh - g2))))
        k = model.random(rng)
        ka, kb = phi(model.mul(k, g1), model.mul(k, g2))
        worst_equiv = max(worst_equiv,
                          float(np.max(np.abs(ka - model.mul(k, g)))),
                          float(np.max(np.abs(kb - h))))
    evidence = {
        "group_dim": model.dim,
        "roundtrip": worst_round,
        "equivariance": worst_equiv,
        "fiber_membership": worst_fiber,
        "n_samples": n_samples,
    }
    return PairNormalForm(model.name, H_basis, h_dim, g0, phi, phi_inv, evidence)


def cylindrical_projection(axis=(0.0, 0.0, 1.0), group_space=None, target=None,
                           name="p_cyl"):
    """The SE(3) -> lines map (a, R) -> (a - (a.v)v, v) with v = R axis."""
    u = np.asarray(axis, dtype=np.float64)
    src = group_space if group_space is not None else se3_space("SE3")
    if target is None:
        target = line_space("lines")

    def lin(coeffs, names):
        terms = [f"{c!r} * {n}" for c, n in zip(coeffs.tolist(), names) if c != 0.0]
        return " + ".join(terms) if terms else "0.0"

    v = [lin(u, (f"r{i}0", f"r{i}1", f"r{i}2")) for i in range(3)]
    dot = " + ".join(f"a{ax} * ({vi})" for ax, vi in zip("xyz", v))
    x = [f"a{ax} - ({dot}) * ({vi})" for ax, vi in zip("xyz", v)]
    return SmoothMap(name, src, target, tuple(x) + tuple(v))


# -- realizability -------------------------------------------------------------


@dataclass
class Realizability:
    yes: bool
    reason: str
    normal_form: PairNormalForm = None
    witness: tuple = None
    evidence: object = None

    def __bool__(self):
        return self.yes

    def __str__(self):
        return ("realizable: " if self.yes else "not realizable: ") + self.reason


def realizable_as_pair(model, target, trials=2000, seed=0):
    """Can the motion set arise as the relative motion of a two-actor pair?

    Yes requires a closed subgroup with a subalgebra of matching dimension
    (compact targets inside SE(3) must fit in so(3), per the conjugacy
    rule); No pins the obstruction.
    """
    if target.kind == "sliding_hinge":
        chk = motion_set_subgroup_check(target, seed=seed)
        return Realizability(False, OBSTRUCTION_SLIDING_HINGE,
                             witness=chk.witness, evidence=chk)
    if target.kind == "torus2":
        if model.name == "SE3":
            found = search_subalgebras(so3(), 2, trials=trials, seed=seed)
            if not found.planes:
                return Realizability(False, OBSTRUCTION_SO3, evidence=found)
            return Realizability(True, "compact 2-dim subalgebra found",
                                 evidence=found)
        found = search_subalgebras(se2_algebra(), 2, trials=trials, seed=seed)
        return Realizability(False, OBSTRUCTION_SE2, evidence=found)
    if target.kind == "cylindrical":
        if model.name == "SE2":
            found = search_subalgebras(se2_algebra(), 2, trials=trials, seed=seed)
            return Realizability(False, OBSTRUCTION_SE2, evidence=found)
        axis = target.params.get("axis", (0.0, 0.0, 1.0))
        p = cylindrical_projection(axis, group_space=model.space)
        nf = pair_normal_form(model, p, p, line_action, seed=seed)
        return Realizability(True, "H isomorphic to R x S1 (translation along "
                                   "and rotation about the axis)",
                             normal_form=nf)
    chk = motion_set_subgroup_check(target, seed=seed)
    if not chk.is_subgroup:
        return Realizability(False, chk.detail, witness=chk.witness, evidence=chk)
    return Realizability(True, chk.detail, evidence=chk)
