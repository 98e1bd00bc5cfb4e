"""Rank-based verdicts: submersion/surjectivity checks, dimension estimates.

Refutations (dimension obstruction, rank-deficient witness) are sound;
confirmations are sampled evidence, never proofs — the verdict types keep
that distinction explicit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import SolveDiverged
from .solve import as_rng, preimage_point, sample_points
from .space import SOLVE_TOL

RANK_REL_TOL = 1e-8  # singular values below 1e-8 * sigma_max count as zero
FD_STEP = 1e-5


@dataclass
class DimensionObstructed:
    source_dim: int
    target_dim: int
    ok = False

    def __str__(self):
        return f"dimension obstruction: source dim {self.source_dim} < target dim {self.target_dim}"


@dataclass
class RankDeficientWitness:
    point: np.ndarray
    rank: int
    needed: int
    ok = False

    def __str__(self):
        return f"rank {self.rank} < {self.needed} at witness point"


@dataclass
class SampledVerified:
    n_samples: int
    ok = True

    def __str__(self):
        return f"sampled-verified on {self.n_samples} points"


def numerical_rank(M, rel_tol=RANK_REL_TOL):
    if M.size == 0:
        return 0
    sv = np.linalg.svd(M, compute_uv=False)
    if sv[0] == 0.0:
        return 0
    return int(np.sum(sv > rel_tol * sv[0]))


def tangent_basis(space, x, rel_tol=RANK_REL_TOL):
    """Orthonormal basis (ambient x d) of the tangent space at a feasible x."""
    from ..expr import eval_with_jac

    n = space.ambient_dim
    if not space.residuals:
        return np.eye(n)
    _, jac = eval_with_jac(space.program(), np.asarray(x, dtype=np.float64)[None, :])
    J = jac[0]
    u, sv, vt = np.linalg.svd(J, full_matrices=True)
    smax = sv[0] if len(sv) else 0.0
    rank = int(np.sum(sv > rel_tol * smax)) if smax > 0 else 0
    return vt[rank:].T  # null space columns


def differential_rank(smap, x, rel_tol=RANK_REL_TOL):
    """Rank of d(smap) restricted to the source tangent space at x."""
    T = tangent_basis(smap.source, x, rel_tol)
    _, J = smap.jacobian(np.asarray(x, dtype=np.float64))
    return numerical_rank(J @ T, rel_tol)


def check_surjective_submersion(smap, n_samples=8, seed=0, scale=1.0):
    """Sampled submersion + surjectivity check.

    Submersion: tangent-restricted Jacobian has rank dim(target) at each of
    n_samples feasible source points. Surjectivity: a preimage is solved for
    n_samples random target points (SolveDiverged propagates on failure).
    """
    rng = as_rng(seed)
    src, tgt = smap.source, smap.target
    if src.dim < tgt.dim:
        return DimensionObstructed(src.dim, tgt.dim)
    if tgt.dim == 0 and tgt.ambient_dim == 0:
        return SampledVerified(0)
    for fp in sample_points(src, n_samples, rng, scale=scale):
        r = differential_rank(smap, fp.x)
        if r < tgt.dim:
            return RankDeficientWitness(fp.x, r, tgt.dim)
    for fp in sample_points(tgt, n_samples, rng, scale=scale):
        preimage_point(smap, fp.x, rng, scale=scale)
    return SampledVerified(n_samples)


@dataclass
class LocalDimEstimate:
    values: list  # one tangent-dimension estimate per converged sample
    points: list = field(repr=False, default_factory=list)

    @property
    def histogram(self):
        h = {}
        for v in self.values:
            h[v] = h.get(v, 0) + 1
        return dict(sorted(h.items()))

    @property
    def distinct(self):
        return sorted(set(self.values))

    def constant(self):
        return len(self.distinct) == 1

    def __str__(self):
        return f"local dims {self.histogram}"


def local_dimension_estimate(space, n_samples=50, seed=0, scale=1.0, rel_tol=RANK_REL_TOL,
                             max_attempts_factor=6):
    """Tangent-dimension histogram: ambient - rank(residual Jacobian) at
    converged feasible samples. Disagreeing estimates witness that the zero
    set is not cut out as a manifold of one dimension."""
    from ..expr import eval_with_jac

    rng = as_rng(seed)
    values, points = [], []
    attempts = 0
    from .solve import solve_feasible

    while len(values) < n_samples and attempts < max_attempts_factor * n_samples:
        attempts += 1
        try:
            fp = solve_feasible(space, rng, scale=scale, restarts=2)
        except SolveDiverged:
            continue
        if not space.residuals:
            values.append(space.ambient_dim)
            points.append(fp.x)
            continue
        _, jac = eval_with_jac(space.program(), fp.x[None, :])
        rank = numerical_rank(jac[0], rel_tol)
        values.append(space.ambient_dim - rank)
        points.append(fp.x)
    if not values:
        raise SolveDiverged(f"no converged samples on {space.name!r}")
    return LocalDimEstimate(values, points)


def fd_jacobian(fn, x, step=FD_STEP):
    """Central-difference Jacobian of a vector callable (the AD oracle)."""
    x = np.asarray(x, dtype=np.float64)
    f0 = np.asarray(fn(x))
    J = np.empty((f0.shape[0], x.shape[0]))
    for i in range(x.shape[0]):
        hi = np.zeros_like(x)
        hi[i] = step
        J[:, i] = (np.asarray(fn(x + hi)) - np.asarray(fn(x - hi))) / (2 * step)
    return J
