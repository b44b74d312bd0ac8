"""Rosenbrock-type objectives on ``R^{2n}`` with a warped, flat metric.

The metric ``<u, v> = u^T G(x) v`` with 2x2 blocks

    G_i(x) = [[1 + 4 x_{2i-1}^2, -2 x_{2i-1}], [-2 x_{2i-1}, 1]]

is the pullback of the Euclidean metric under
``phi^{-1}(x) = (x_1, x_1^2 - x_2, ...)``. In the flat coordinates each

    f_j(x) = sum_i a_ij (x_{2i-1}^2 - x_{2i})^2 + (x_{2i-1} - b_ij)^2

becomes the convex quadratic ``g_j(z) = sum_i a_ij z_{2i}^2 + (z_{2i-1} - b_ij)^2``.
"""

import numpy as np

from ..manifolds import Manifold
from ..problem import VectorObjective


def to_flat(x):
    """``phi^{-1}``: pairs ``(x1, x2) -> (x1, x1^2 - x2)``."""
    x = np.asarray(x, dtype=float)
    z = x.copy()
    z[1::2] = x[0::2] ** 2 - x[1::2]
    return z


def from_flat(z):
    """``phi``: pairs ``(z1, z2) -> (z1, z1^2 - z2)``."""
    z = np.asarray(z, dtype=float)
    x = z.copy()
    x[1::2] = z[0::2] ** 2 - z[1::2]
    return x


def tangent_to_flat(x, v):
    """``d phi^{-1}(x) v``; acts on the last axis so batches work."""
    w = np.array(v, dtype=float, copy=True)
    w[..., 1::2] = 2.0 * x[0::2] * v[..., 0::2] - v[..., 1::2]
    return w


def tangent_from_flat(x, w):
    """``d phi(z) w`` at ``z = phi^{-1}(x)``; inverse of :func:`tangent_to_flat`."""
    v = np.array(w, dtype=float, copy=True)
    v[..., 1::2] = 2.0 * x[0::2] * w[..., 0::2] - w[..., 1::2]
    return v


class RosenbrockManifold(Manifold):
    """``R^{2n}`` with the block metric ``G(x)``; complete and flat."""

    name = "rosenbrock"
    has_distance = True
    curvature_lower_bound = 0.0

    def __init__(self, n_pairs):
        if n_pairs < 1:
            raise ValueError("need at least one pair")
        self.n_pairs = int(n_pairs)

    @property
    def dim(self):
        return 2 * self.n_pairs

    def metric(self, x):
        G = np.zeros((self.dim, self.dim))
        for i in range(self.n_pairs):
            s = x[2 * i]
            G[2 * i:2 * i + 2, 2 * i:2 * i + 2] = [[1 + 4 * s * s, -2 * s], [-2 * s, 1.0]]
        return G

    def inner(self, x, u, v):
        return float(np.dot(tangent_to_flat(x, u), tangent_to_flat(x, v)))

    def exp(self, x, v, t=1.0):
        if t == 0:
            return np.array(x, dtype=float, copy=True)
        y = np.array(x, dtype=float, copy=True)
        y[0::2] += t * v[0::2]
        y[1::2] += t * t * v[0::2] ** 2 + t * v[1::2]
        return y

    def distance(self, x, y):
        return float(np.linalg.norm(to_flat(x) - to_flat(y)))

    def egrad2rgrad(self, x, egrads):
        # G_i^{-1} = [[1, 2s], [2s, 1 + 4 s^2]] since det G_i = 1
        egrads = np.asarray(egrads, dtype=float)
        s = x[0::2]
        g1 = egrads[..., 0::2]
        g2 = egrads[..., 1::2]
        out = np.empty_like(egrads)
        out[..., 0::2] = g1 + 2 * s * g2
        out[..., 1::2] = 2 * s * g1 + (1 + 4 * s * s) * g2
        return out

    def gram(self, x, vectors):
        w = tangent_to_flat(x, np.asarray(vectors, dtype=float))
        return w @ w.T

    def tangent_basis(self, x):
        return tangent_from_flat(x, np.eye(self.dim))


class Rosenbrock(VectorObjective):
    """Vector Rosenbrock objective with weights ``a`` (n x m, positive) and shifts ``b`` (n x m)."""

    def __init__(self, a, b):
        a = np.atleast_2d(np.asarray(a, dtype=float))
        b = np.atleast_2d(np.asarray(b, dtype=float))
        if a.shape != b.shape:
            raise ValueError("a and b must have the same (n, m) shape")
        if np.any(a <= 0):
            raise ValueError("weights a must be positive")
        self.a, self.b = a, b
        self.n_pairs, self.m = a.shape

    @classmethod
    def bicriteria(cls):
        """``f_1 = 100 (x1^2 - x2)^2 + (x1 - 1)^2``, ``f_2`` the same with shift 2."""
        return cls([[100.0, 100.0]], [[1.0, 2.0]])

    @property
    def lipschitz_constant(self):
        return float(max(2.0, 2.0 * self.a.max()))

    def value(self, x):
        r = x[0::2] ** 2 - x[1::2]
        return self.a.T @ (r * r) + ((x[0::2, None] - self.b) ** 2).sum(axis=0)

    def egrad(self, x):
        s = x[0::2, None]
        r = (x[0::2] ** 2 - x[1::2])[:, None]
        out = np.empty((self.m, 2 * self.n_pairs))
        out[:, 0::2] = (4.0 * self.a * s * r + 2.0 * (s - self.b)).T
        out[:, 1::2] = (-2.0 * self.a * r).T
        return out

    def f_star(self):
        return np.zeros(self.m)

    def dominating_pareto_point(self, x):
        """A point ``q`` with ``F(q) <= F(x)`` componentwise, Pareto optimal when ``m = 2``.

        In flat coordinates, zeroing each ``z_{2i}`` and clipping ``z_{2i-1}``
        into ``[min_j b_ij, max_j b_ij]`` lowers every ``g_j``.
        """
        z = to_flat(x)
        z[1::2] = 0.0
        z[0::2] = np.clip(z[0::2], self.b.min(axis=1), self.b.max(axis=1))
        return from_flat(z)


class FlatRosenbrock(VectorObjective):
    """The pullback ``g_j = f_j o phi`` on Euclidean ``R^{2n}``."""

    def __init__(self, a, b):
        self.a = np.atleast_2d(np.asarray(a, dtype=float))
        self.b = np.atleast_2d(np.asarray(b, dtype=float))
        self.n_pairs, self.m = self.a.shape

    def value(self, z):
        return self.a.T @ (z[1::2] ** 2) + ((z[0::2, None] - self.b) ** 2).sum(axis=0)

    def egrad(self, z):
        out = np.empty((self.m, 2 * self.n_pairs))
        out[:, 0::2] = (2.0 * (z[0::2, None] - self.b)).T
        out[:, 1::2] = (2.0 * self.a * z[1::2, None]).T
        return out

    def hessian_eigenvalues(self, j):
        return np.sort(np.concatenate([np.full(self.n_pairs, 2.0), 2.0 * self.a[:, j]]))
