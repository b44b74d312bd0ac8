"""Manifold abstraction shared by the solver and the bundled instances.

Points and tangent vectors are plain numpy arrays whose layout is owned by
the manifold (a vector of length ``n`` or a full symmetric ``n x n`` matrix).
A tangent vector is always interpreted at the point passed alongside it.
"""

from dataclasses import dataclass

import numpy as np


class DomainError(ValueError):
    """A point or tangent vector lies outside the manifold's domain."""


class CapabilityError(NotImplementedError):
    """The manifold does not provide the requested optional operation."""


@dataclass(frozen=True)
class ManifoldDescriptor:
    dimension: int
    has_distance: bool
    # None means the bound is unknown.
    curvature_lower_bound: float | None


class Manifold:
    """Base class for Riemannian manifolds with a closed-form exponential map.

    Subclasses implement :meth:`inner`, :meth:`exp` and :meth:`egrad2rgrad`,
    and may override :meth:`gram` with a vectorized version. ``distance`` is
    optional; it is only needed by the convergence diagnostics.
    """

    name = "manifold"
    has_distance = False
    curvature_lower_bound: float | None = None

    @property
    def dim(self):
        raise NotImplementedError

    @property
    def descriptor(self):
        return ManifoldDescriptor(self.dim, self.has_distance, self.curvature_lower_bound)

    def check_point(self, p):
        p = np.asarray(p, dtype=float)
        if not np.all(np.isfinite(p)):
            raise DomainError(f"{self.name}: point has non-finite coordinates")
        return p

    def inner(self, p, u, v):
        raise NotImplementedError

    def norm(self, p, v):
        return float(np.sqrt(max(self.inner(p, v, v), 0.0)))

    def exp(self, p, v, t=1.0):
        raise NotImplementedError

    def distance(self, p, q):
        raise CapabilityError(f"{self.name} does not provide a distance")

    def egrad2rgrad(self, p, egrads):
        """Map a batch of Euclidean gradients (leading axis) to Riemannian ones."""
        raise NotImplementedError

    def gram(self, p, vectors):
        m = len(vectors)
        out = np.empty((m, m))
        for i in range(m):
            for j in range(i, m):
                out[i, j] = out[j, i] = self.inner(p, vectors[i], vectors[j])
        return out

    def tangent_basis(self, p):
        """Orthonormal basis of the tangent space at ``p``, stacked on axis 0."""
        raise NotImplementedError

    def random_tangent(self, p, rng):
        basis = self.tangent_basis(p)
        return np.tensordot(rng.standard_normal(len(basis)), basis, axes=1)


class Euclidean(Manifold):
    """``R^n`` with the standard inner product; ``exp_x(v) = x + v``."""

    name = "euclidean"
    has_distance = True
    curvature_lower_bound = 0.0

    def __init__(self, n):
        if n < 1:
            raise ValueError("dimension must be at least 1")
        self.n = int(n)

    @property
    def dim(self):
        return self.n

    def inner(self, p, u, v):
        return float(np.dot(u, v))

    def norm(self, p, v):
        return float(np.linalg.norm(v))

    def exp(self, p, v, t=1.0):
        if t == 0:
            return np.array(p, dtype=float, copy=True)
        return p + t * v

    def distance(self, p, q):
        return float(np.linalg.norm(np.asarray(p) - np.asarray(q)))

    def egrad2rgrad(self, p, egrads):
        return np.asarray(egrads, dtype=float)

    def gram(self, p, vectors):
        vectors = np.asarray(vectors)
        return vectors @ vectors.T

    def tangent_basis(self, p):
        return np.eye(self.n)
