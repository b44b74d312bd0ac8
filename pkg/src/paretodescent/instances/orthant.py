"""Log-barrier type objectives on the positive orthant with ``G(x) = diag(x)^{-2}``.

``phi(z) = exp(z)`` (componentwise) is an isometry from Euclidean ``R^n``, so
the orthant is complete and flat and

    f_j(x) = a_j ln(prod_i x_i^{u_ij} + b_j) - sum_i w_ij ln x_i + c_j sum_i ln^2 x_i

pulls back to ``g_j(z) = a_j ln(exp(u_j^T z) + b_j) - w_j^T z + c_j z^T z``.
"""

import numpy as np
from scipy.optimize import brentq
from scipy.special import expit

from ..manifolds import DomainError, Manifold
from ..problem import VectorObjective


class PositiveOrthant(Manifold):
    name = "orthant"
    has_distance = True
    curvature_lower_bound = 0.0

    def __init__(self, n):
        if n < 1:
            raise ValueError("dimension must be at least 1")
        self.n = int(n)

    @property
    def dim(self):
        return self.n

    def check_point(self, x):
        x = super().check_point(x)
        if np.any(x <= 0):
            raise DomainError("orthant: point has a nonpositive component")
        return x

    def inner(self, x, u, v):
        return float(np.dot(u / x, v / x))

    def norm(self, x, v):
        return float(np.linalg.norm(v / x))

    def exp(self, x, v, t=1.0):
        if t == 0:
            return np.array(x, dtype=float, copy=True)
        return x * np.exp(t * v / x)

    def distance(self, x, y):
        return float(np.linalg.norm(np.log(x) - np.log(y)))

    def egrad2rgrad(self, x, egrads):
        return np.asarray(egrads, dtype=float) * (x * x)

    def gram(self, x, vectors):
        w = np.asarray(vectors, dtype=float) / x
        return w @ w.T

    def tangent_basis(self, x):
        return np.diag(x)


class LogBarrier(VectorObjective):
    """Parameters ``u``, ``w`` (n x m, nonnegative) and ``a``, ``b``, ``c`` (m, positive)."""

    def __init__(self, u, w, a, b, c):
        self.u = np.atleast_2d(np.asarray(u, dtype=float))
        self.w = np.atleast_2d(np.asarray(w, dtype=float))
        self.a, self.b, self.c = (np.atleast_1d(np.asarray(x, dtype=float)) for x in (a, b, c))
        n, m = self.u.shape
        if self.w.shape != (n, m) or any(x.shape != (m,) for x in (self.a, self.b, self.c)):
            raise ValueError("inconsistent parameter shapes")
        if np.any(self.u < 0) or np.any(self.w < 0):
            raise ValueError("u and w must be nonnegative")
        if np.any(self.a <= 0) or np.any(self.b <= 0) or np.any(self.c <= 0):
            raise ValueError("a, b and c must be positive")
        self.n, self.m = n, m
        self._log_b = np.log(self.b)

    @classmethod
    def random(cls, n, m, rng):
        """All parameters drawn uniformly from ``(0, 1)``."""
        u, w = rng.random((n, m)), rng.random((n, m))
        a, b, c = rng.random(m), rng.random(m), rng.random(m)
        return cls(u, w, a, b, c)

    @property
    def lipschitz_constant(self):
        # Hessian of a ln(e^s + b) along u is a sigma(1 - sigma) u u^T <= (a/4) u u^T.
        return float(np.max(0.25 * self.a * np.einsum("ij,ij->j", self.u, self.u) + 2 * self.c))

    def _flat(self, x):
        if np.any(x <= 0):
            raise DomainError("orthant: point has a nonpositive component")
        return np.log(x)

    def flat_value(self, z):
        s = z @ self.u
        return self.a * np.logaddexp(s, self._log_b) - z @ self.w + self.c * (z @ z)

    def flat_gradient(self, z):
        sig = expit(z @ self.u - self._log_b)
        return (self.a * sig * self.u - self.w + 2.0 * self.c * z[:, None]).T

    def value(self, x):
        return self.flat_value(self._flat(x))

    def egrad(self, x):
        return self.flat_gradient(self._flat(x)) / x

    def gradients(self, x, manifold):
        if isinstance(manifold, PositiveOrthant):
            return self.flat_gradient(self._flat(x)) * x
        return super().gradients(x, manifold)

    def flat_minimizer(self, j):
        """Minimizer of ``g_j``: ``z = (w - a sigma u) / (2c)`` with ``s = u^T z`` solved by bracketing."""
        u, w, a, c, lb = self.u[:, j], self.w[:, j], self.a[j], self.c[j], self._log_b[j]
        uu, uw = u @ u, u @ w

        def residual(s):
            return s - (uw - a * expit(s - lb) * uu) / (2 * c)

        lo, hi = (uw - a * uu) / (2 * c), uw / (2 * c)
        s = brentq(residual, lo - 1.0, hi + 1.0, xtol=1e-15, rtol=4 * np.finfo(float).eps)
        return (w - a * expit(s - lb) * u) / (2 * c)

    def f_star(self):
        return np.array([self.flat_value(self.flat_minimizer(j))[j] for j in range(self.m)])


class FlatLogBarrier(VectorObjective):
    """The pullback ``g = F o exp`` on Euclidean ``R^n``."""

    def __init__(self, barrier):
        self.barrier = barrier
        self.m = barrier.m

    def value(self, z):
        return self.barrier.flat_value(z)

    def egrad(self, z):
        return self.barrier.flat_gradient(z)
