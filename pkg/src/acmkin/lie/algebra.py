"""Structure constants for se(2), so(3), se(3) and subalgebra queries.

Elements are coefficient vectors over a fixed basis; the bracket is a
(dim, dim, dim) table. search_subalgebras is a randomized refuter: many
random k-planes are pushed toward bracket-closure (Gauss-Newton on a
Grassmannian chart), survivors are verified and deduplicated, and an empty
result is evidence of non-existence at the recorded trial count, not proof.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np


@dataclass(frozen=True)
class LieAlgebraModel:
    name: str
    basis_names: tuple
    table: np.ndarray  # table[i, j] = coefficients of [e_i, e_j]

    @property
    def dim(self):
        return len(self.basis_names)

    def bracket(self, u, v):
        u = np.asarray(u, dtype=np.float64)
        v = np.asarray(v, dtype=np.float64)
        if u.shape[-1] != self.dim or v.shape[-1] != self.dim:
            raise ValueError(f"{self.name}: expected coefficient vectors of "
                             f"length {self.dim}")
        return np.einsum("...i,...j,ijk->...k", u, v, self.table)

    def basis_vector(self, name):
        e = np.zeros(self.dim)
        e[self.basis_names.index(name)] = 1.0
        return e

    def antisymmetry_residual(self):
        return float(np.max(np.abs(self.table + self.table.transpose(1, 0, 2))))

    def jacobi_residual(self):
        """max over basis triples of |[[x,y],z] + [[y,z],x] + [[z,x],y]|."""
        worst = 0.0
        eye = np.eye(self.dim)
        for x in eye:
            for y in eye:
                for z in eye:
                    s = (self.bracket(self.bracket(x, y), z)
                         + self.bracket(self.bracket(y, z), x)
                         + self.bracket(self.bracket(z, x), y))
                    worst = max(worst, float(np.max(np.abs(s))))
        return worst


def _table(dim, entries):
    t = np.zeros((dim, dim, dim))
    for (i, j, k), v in entries.items():
        t[i, j, k] = v
        t[j, i, k] = -v
    return t


def se2():
    """Basis (A, X, Y): [A,X]=Y, [A,Y]=-X, [X,Y]=0."""
    return LieAlgebraModel("se2", ("A", "X", "Y"),
                           _table(3, {(0, 1, 2): 1.0, (0, 2, 1): -1.0}))


def so3():
    """Basis (E1, E2, E3), cyclic: [E1,E2]=E3 etc."""
    return LieAlgebraModel("so3", ("E1", "E2", "E3"),
                           _table(3, {(0, 1, 2): 1.0, (1, 2, 0): 1.0,
                                      (2, 0, 1): 1.0}))


def se3():
    """Basis (J1, J2, J3, P1, P2, P3): rotations bracket cyclically, rotate
    the translations, and translations commute."""
    entries = {}
    eps = {(0, 1): 2, (1, 2): 0, (2, 0): 1}
    for (i, j), k in eps.items():
        entries[(i, j, k)] = 1.0  # [Ji, Jj] = Jk
        entries[(i, 3 + j, 3 + k)] = 1.0  # [Ji, Pj] = Pk
        entries[(j, 3 + i, 3 + k)] = -1.0  # [Jj, Pi] = -Pk
    return LieAlgebraModel("se3", ("J1", "J2", "J3", "P1", "P2", "P3"),
                           _table(6, entries))


MODELS = {"se2": se2, "so3": so3, "se3": se3}


def is_subalgebra(model, basis, tol=1e-10):
    """True iff every pairwise bracket of the basis stays in its span."""
    B = np.atleast_2d(np.asarray(basis, dtype=np.float64))
    if B.shape[1] != model.dim:
        raise ValueError("basis vectors have the wrong length")
    rank = np.linalg.matrix_rank(B, tol=1e-8)
    if rank < B.shape[0]:
        raise ValueError("degenerate basis (linearly dependent)")
    q, _ = np.linalg.qr(B.T)  # columns span the plane
    for i, j in combinations(range(B.shape[0]), 2):
        b = model.bracket(B[i], B[j])
        resid = b - q @ (q.T @ b)
        if np.linalg.norm(resid) > tol * max(1.0, np.linalg.norm(b)):
            return False
    return True


@dataclass
class SubalgebraSearch:
    model_name: str
    k: int
    trials: int
    planes: list  # orthonormal (dim, k) bases of the distinct closed spans

    def __len__(self):
        return len(self.planes)

    def contains_span(self, vectors, tol=1e-6):
        """Is span(vectors) among the found planes?"""
        B = np.atleast_2d(np.asarray(vectors, dtype=np.float64))
        q, _ = np.linalg.qr(B.T)
        proj = q @ q.T
        return any(np.max(np.abs(p @ p.T - proj)) <= tol for p in self.planes)

    def __repr__(self):
        return (f"SubalgebraSearch({self.model_name}, k={self.k}, "
                f"trials={self.trials}, found={len(self.planes)})")


def _orth(M):
    # Sign-canonical QR (R diagonal >= 0) so that orth() is continuous in M
    # wherever the leading minors stay nonzero; plain QR can flip column
    # signs under tiny perturbations, which wrecks finite differences.
    q, r = np.linalg.qr(M)
    d = np.sign(np.diagonal(r, axis1=-2, axis2=-1))
    d = np.where(d == 0.0, 1.0, d)
    return q * d[..., None, :]


def _closure_residual(model, Q):
    """(B,) stacked norms of bracket components orthogonal to each plane."""
    B, dim, k = Q.shape
    if k < 2:
        return np.zeros((B, 0))
    full, _ = np.linalg.qr(Q, mode="complete")
    N = full[:, :, k:]  # orthogonal complement, (B, dim, dim-k)
    rows = []
    for i, j in combinations(range(k), 2):
        b = model.bracket(Q[:, :, i], Q[:, :, j])
        rows.append(np.einsum("bdm,bd->bm", N, b))
    return np.concatenate(rows, axis=1)


def _fd_system(model, Q, fd_step, central=False):
    """Residuals, complement frames, and a finite-difference Jacobian in
    the chart V(Z) = orth(Q + N Z)."""
    B, dim, k = Q.shape
    n_params = (dim - k) * k
    F = _closure_residual(model, Q)
    full, _ = np.linalg.qr(Q, mode="complete")
    N = full[:, :, k:]
    J = np.empty(F.shape + (n_params,))
    for p in range(n_params):
        Z = np.zeros((B, dim - k, k))
        Z.reshape(B, -1)[:, p] = fd_step
        bump = np.einsum("bdm,bmk->bdk", N, Z)
        Fp = _closure_residual(model, _orth(Q + bump))
        if central:
            Fm = _closure_residual(model, _orth(Q - bump))
            J[:, :, p] = (Fp - Fm) / (2.0 * fd_step)
        else:
            J[:, :, p] = (Fp - F) / fd_step
    return F, J, N


def _polish(model, q, fd_step, iters=60, floor=1e-16):
    """Undamped least-squares refinement of one near-closed plane.

    The closure residual vanishes quadratically along the solution set, so
    the damped batch phase stalls around sqrt(tol); plain Gauss-Newton with
    lstsq still halves the distance per step and lands near machine noise.
    """
    dim, k = q.shape
    Q = q[None]
    best = np.max(np.abs(_closure_residual(model, Q)))
    for _ in range(iters):
        if best <= floor:
            break
        F, J, N = _fd_system(model, Q, fd_step, central=True)
        step, *_ = np.linalg.lstsq(J[0], -F[0], rcond=None)
        improved = False
        for _ in range(8):
            Qn = _orth(Q + np.einsum("bdm,bmk->bdk", N,
                                     step.reshape(1, dim - k, k)))
            r = np.max(np.abs(_closure_residual(model, Qn)))
            if r < best:
                Q, best, improved = Qn, r, True
                break
            step = step / 2.0
        if not improved:
            break
    return Q[0], best


def search_subalgebras(model, k, trials=1000, seed=0, iters=40, tol=1e-10,
                       fd_step=1e-7, damping=1e-8):
    """Randomized search for bracket-closed k-planes, canonical axis planes
    seeded first; deterministic per seed."""
    if not 1 <= k < model.dim:
        raise ValueError(f"need 1 <= k < {model.dim}")
    rng = np.random.default_rng(seed)
    canonical = []
    for combo in combinations(range(model.dim), k):
        m = np.zeros((model.dim, k))
        for col, idx in enumerate(combo):
            m[idx, col] = 1.0
        canonical.append(m)
    raw = np.concatenate([
        np.stack(canonical),
        rng.standard_normal((trials, model.dim, k)),
    ])
    Q = _orth(raw)
    n_params = (model.dim - k) * k

    if k >= 2:
        for _ in range(iters):
            F, J, N = _fd_system(model, Q, fd_step)
            if np.max(np.abs(F)) <= tol:
                break
            JtJ = np.einsum("brp,brq->bpq", J, J)
            scale = 1.0 + np.einsum("bpp->b", JtJ)
            JtJ += (damping * scale)[:, None, None] * np.eye(n_params)
            rhs = -np.einsum("brp,br->bp", J, F)
            dZ = np.linalg.solve(JtJ, rhs[..., None])
            dZ = dZ.reshape(Q.shape[0], model.dim - k, k)
            Q = _orth(Q + np.einsum("bdm,bmk->bdk", N, dZ))
        coarse = np.max(np.abs(_closure_residual(model, Q)), axis=1)
        survivors = []
        for b in np.flatnonzero(coarse <= max(tol, 1e-6)):
            q, resid = _polish(model, Q[b], fd_step)
            if resid <= tol:
                survivors.append((q, resid))
    else:
        survivors = [(q, 0.0) for q in Q]

    # one representative per projector bucket, lowest residual wins (the
    # canonical seeds are often exact and should anchor their bucket)
    buckets = {}
    for q, resid in survivors:
        key = (np.round(q @ q.T, 4) + 0.0).tobytes()  # +0.0 merges -0.0
        if key not in buckets or resid < buckets[key][1]:
            buckets[key] = (q, resid)
    planes = [q for q, _ in buckets.values()
              if is_subalgebra(model, q.T, tol=1e-10)]
    return SubalgebraSearch(model.name, k, trials, planes)
