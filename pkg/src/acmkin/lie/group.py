"""Numeric SE(2)/SE(3) group operations on the ambient coordinates.

Group elements are ambient vectors of the embedded spaces: SE(2) is
(px, py, c, s) with c^2+s^2=1, SE(3) is (ax, ay, az, r00..r22 row-major)
with R orthogonal, det +1. Tangent-at-identity matrices line the algebra
basis up with ambient directions so kernels of differentials can be read
off in algebra coefficients.
"""

from __future__ import annotations

import numpy as np

from ..geom import se2_space, se3_space
from .algebra import se2 as se2_algebra
from .algebra import se3 as se3_algebra


def _skew(w):
    wx, wy, wz = w
    return np.array([[0.0, -wz, wy], [wz, 0.0, -wx], [-wy, wx, 0.0]])


def rotation_about(u, theta):
    """Rodrigues rotation about the unit axis u."""
    u = np.asarray(u, dtype=np.float64)
    K = _skew(u)
    return np.eye(3) + np.sin(theta) * K + (1.0 - np.cos(theta)) * (K @ K)


class SE2Model:
    name = "SE2"
    dim = 3

    def __init__(self):
        self.space = se2_space("SE2")
        self.algebra = se2_algebra()
        self.identity = np.array([0.0, 0.0, 1.0, 0.0])

    def mul(self, g, h):
        gx, gy, gc, gs = g
        hx, hy, hc, hs = h
        return np.array([
            gx + gc * hx - gs * hy,
            gy + gs * hx + gc * hy,
            gc * hc - gs * hs,
            gs * hc + gc * hs,
        ])

    def inv(self, g):
        gx, gy, gc, gs = g
        return np.array([-(gc * gx + gs * gy), -(-gs * gx + gc * gy), gc, -gs])

    def random(self, rng, scale=1.0):
        theta = rng.uniform(-np.pi, np.pi)
        x, y = rng.normal(scale=scale, size=2)
        return np.array([x, y, np.cos(theta), np.sin(theta)])

    def element(self, x, y, theta):
        return np.array([x, y, np.cos(theta), np.sin(theta)])

    def tangent_at_identity(self):
        """Columns follow the algebra basis (A, X, Y)."""
        T = np.zeros((4, 3))
        T[3, 0] = 1.0  # A: d/dtheta (cos, sin) at 0 -> e_s
        T[0, 1] = 1.0  # X -> e_px
        T[1, 2] = 1.0  # Y -> e_py
        return T


class SE3Model:
    name = "SE3"
    dim = 6

    def __init__(self):
        self.space = se3_space("SE3")
        self.algebra = se3_algebra()
        self.identity = np.concatenate([np.zeros(3), np.eye(3).ravel()])

    @staticmethod
    def split(g):
        g = np.asarray(g, dtype=np.float64)
        return g[:3], g[3:].reshape(3, 3)

    @staticmethod
    def join(a, R):
        return np.concatenate([a, np.asarray(R).ravel()])

    def mul(self, g, h):
        ag, Rg = self.split(g)
        ah, Rh = self.split(h)
        return self.join(ag + Rg @ ah, Rg @ Rh)

    def inv(self, g):
        a, R = self.split(g)
        return self.join(-(R.T @ a), R.T)

    def random(self, rng, scale=1.0):
        axis = rng.normal(size=3)
        axis /= np.linalg.norm(axis)
        R = rotation_about(axis, rng.uniform(-np.pi, np.pi))
        return self.join(rng.normal(scale=scale, size=3), R)

    def element(self, a, axis, theta):
        return self.join(np.asarray(a, dtype=np.float64),
                         rotation_about(axis, theta))

    def tangent_at_identity(self):
        """Columns follow the algebra basis (J1, J2, J3, P1, P2, P3)."""
        T = np.zeros((12, 6))
        for k in range(3):
            T[3:, k] = _skew(np.eye(3)[k]).ravel()
            T[k, 3 + k] = 1.0
        return T


GROUPS = {"SE2": SE2Model, "SE3": SE3Model}


def group_model(name):
    try:
        return GROUPS[name]()
    except KeyError:
        raise ValueError(f"unknown group {name!r} (have {sorted(GROUPS)})") from None


# -- actions -----------------------------------------------------------------


def left_action(model):
    """G acting on itself by left multiplication."""
    return model.mul


def plane_action(g, m):
    """SE(2) acting affinely on the plane."""
    px, py, c, s = g
    return np.array([px + c * m[0] - s * m[1], py + s * m[0] + c * m[1]])


def rotation_only_action(g, m):
    """SE(2) 'acting' on the plane by its rotation part alone (not
    transitive on R^2; used to exercise the transitivity check)."""
    _, _, c, s = g
    return np.array([c * m[0] - s * m[1], s * m[0] + c * m[1]])


def line_action(g, m):
    """SE(3) on lines (x, v): rotate the direction, move the base point,
    re-project so x stays the point closest to the origin."""
    a, R = SE3Model.split(g)
    x, v = np.asarray(m[:3]), np.asarray(m[3:])
    v2 = R @ v
    w = a + R @ x
    return np.concatenate([w - (w @ v2) * v2, v2])
