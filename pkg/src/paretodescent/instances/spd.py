"""Cone of symmetric positive definite matrices with the affine-invariant metric.

``<U, V>_X = tr(V X^{-1} U X^{-1})``; geodesics ``exp_X(V) = X e^{X^{-1} V}``.
Points and tangent vectors are stored as full symmetric ``n x n`` arrays.

Curvature: at the identity, for orthonormal symmetric ``U, V`` the sectional
curvature is ``-1/4 ||[U, V]||_F^2`` (symmetric space ``GL(n)/O(n)``, see
Bridson and Haefliger, "Metric spaces of non-positive curvature", II.10),
which lies in ``[-1/2, 0]``; by congruence invariance the same holds at every
point. The diagnostics use ``kappa = -1/2`` for ``n >= 2`` and ``0`` for
``n = 1``.
"""

import numpy as np
from scipy.linalg import LinAlgError, eigh, solve_triangular
from scipy.special import expit

from ..linalg import cholesky_lower, expm, logdet_spd, symmetrize
from ..manifolds import DomainError, Manifold
from ..problem import VectorObjective


def _chol(X):
    try:
        return cholesky_lower(X)
    except (LinAlgError, ValueError) as exc:
        raise DomainError("spd: matrix is not positive definite") from exc


class SPDMatrices(Manifold):
    name = "spd"
    has_distance = True

    def __init__(self, n):
        if n < 1:
            raise ValueError("matrix order must be at least 1")
        self.n = int(n)
        self.curvature_lower_bound = -0.5 if self.n > 1 else 0.0

    @property
    def dim(self):
        return self.n * (self.n + 1) // 2

    def check_point(self, X):
        X = super().check_point(X)
        _chol(X)
        return X

    def _whiten(self, L, U):
        """``L^{-1} U L^{-T}`` for ``X = L L^T``."""
        W = solve_triangular(L, U, lower=True)
        return solve_triangular(L, W.T, lower=True).T

    def inner(self, X, U, V):
        L = _chol(X)
        return float(np.sum(self._whiten(L, U) * self._whiten(L, V)))

    def exp(self, X, V, t=1.0):
        """``X e^{t X^{-1} V}`` computed as ``L e^{t L^{-1} V L^{-T}} L^T``.

        The two forms agree because ``X^{-1} V = L^{-T} (L^{-1} V L^{-T}) L^T``;
        the congruence keeps the exponent symmetric.
        """
        if t == 0:
            return np.array(X, dtype=float, copy=True)
        L = _chol(X)
        S = symmetrize(self._whiten(L, V))
        try:
            E = expm(t * S)
        except OverflowError as exc:
            raise OverflowError(f"spd exp overflow: t={t:.3g}, ||S||_F={np.linalg.norm(S):.3g}") from exc
        Y = symmetrize(L @ E @ L.T)
        if not np.all(np.isfinite(Y)):
            raise OverflowError("spd exp produced non-finite entries")
        return Y

    def distance(self, X, Y):
        """``||log(X^{-1/2} Y X^{-1/2})||_F`` from the generalized eigenvalues of ``(Y, X)``."""
        _chol(X), _chol(Y)
        lam = eigh(Y, X, eigvals_only=True)
        return float(np.sqrt(np.sum(np.log(lam) ** 2)))

    def egrad2rgrad(self, X, egrads):
        egrads = np.asarray(egrads, dtype=float)
        sym = 0.5 * (egrads + np.swapaxes(egrads, -1, -2))
        return X @ sym @ X

    def gram(self, X, vectors):
        L = _chol(X)
        W = np.array([self._whiten(L, V).ravel() for V in vectors])
        return W @ W.T

    def tangent_basis(self, X):
        L = _chol(X)
        n = self.n
        basis = []
        for i in range(n):
            for j in range(i + 1):
                E = np.zeros((n, n))
                if i == j:
                    E[i, i] = 1.0
                else:
                    E[i, j] = E[j, i] = 1.0 / np.sqrt(2.0)
                basis.append(L @ E @ L.T)
        return np.array(basis)

    def random_point(self, rng, low=0.0, high=100.0):
        """``Q diag(lam) Q^T`` with ``Q`` from a QR of a Gaussian matrix, ``lam ~ U(low, high)``."""
        Q, R = np.linalg.qr(rng.standard_normal((self.n, self.n)))
        Q = Q * np.sign(np.diag(R))
        lam = rng.uniform(low, high, self.n)
        while np.any(lam <= 0):
            lam = rng.uniform(low, high, self.n)
        return symmetrize((Q * lam) @ Q.T)


class LogDet(VectorObjective):
    """Objectives that depend on ``X`` only through ``ln det X``.

    ``family=1``: ``f_i = a_i ln(det(X)^{b_i} + c_i) - d_i ln det X`` with ``d_i < a_i b_i``.
    ``family=2``: ``f_i = a_i (ln det X)^2 - b_i ln det X``.

    Every Euclidean derivative is ``s_i(X) X^{-1}`` so the Riemannian gradient
    is ``s_i(X) X``.
    """

    def __init__(self, family, a, b, c=None, d=None):
        self.family = int(family)
        self.a = np.atleast_1d(np.asarray(a, dtype=float))
        self.b = np.atleast_1d(np.asarray(b, dtype=float))
        self.m = self.a.size
        if np.any(self.a <= 0) or np.any(self.b <= 0) or self.b.size != self.m:
            raise ValueError("a and b must be positive with matching sizes")
        if self.family == 1:
            self.c = np.atleast_1d(np.asarray(c, dtype=float))
            self.d = np.atleast_1d(np.asarray(d, dtype=float))
            if np.any(self.c <= 0) or np.any(self.d <= 0):
                raise ValueError("c and d must be positive")
            if np.any(self.d >= self.a * self.b):
                raise ValueError("family 1 requires d_i < a_i b_i")
            self._log_c = np.log(self.c)
        elif self.family != 2:
            raise ValueError("family must be 1 or 2")

    @classmethod
    def random(cls, family, m, rng):
        """Parameters uniform in ``(0, 1)``; for family 1, ``d = a b U(0, 1)`` keeps ``d < a b``."""
        a, b = rng.random(m), rng.random(m)
        if family == 1:
            c = rng.random(m)
            d = a * b * rng.random(m)
            return cls(1, a, b, c, d)
        return cls(2, a, b)

    def lipschitz_constant(self, n):
        """Bound on the gradient Lipschitz constant along geodesics of ``P^n``.

        Along a unit-speed geodesic ``ln det`` has slope at most ``sqrt(n)``,
        so ``a (ln det)^2`` has second derivative at most ``2 a n``.
        """
        if self.family == 1:
            return float(n * np.max(self.a * self.b ** 2))
        return float(2.0 * n * np.max(self.a))

    def of_logdet(self, ld):
        """Objective values as a function of ``ln det X``."""
        if self.family == 1:
            return self.a * np.logaddexp(self.b * ld, self._log_c) - self.d * ld
        return self.a * ld * ld - self.b * ld

    def scale(self, ld):
        """``s_i`` with ``grad f_i(X) = s_i X``."""
        if self.family == 1:
            return self.a * self.b * expit(self.b * ld - self._log_c) - self.d
        return 2.0 * self.a * ld - self.b

    def value(self, X):
        return self.of_logdet(logdet_spd(L=_chol(X)))

    def egrad(self, X):
        L = _chol(X)
        Xinv = solve_triangular(L, solve_triangular(L, np.eye(len(X)), lower=True),
                                lower=True, trans="T")
        s = self.scale(logdet_spd(L=L))
        return s[:, None, None] * symmetrize(Xinv)[None]

    def gradients(self, X, manifold):
        if isinstance(manifold, SPDMatrices):
            s = self.scale(logdet_spd(L=_chol(X)))
            return s[:, None, None] * np.asarray(X, dtype=float)[None]
        return super().gradients(X, manifold)

    def logdet_minimizers(self):
        """Per-function minimizers in ``ln det X``."""
        if self.family == 1:
            return np.log(self.d * self.c / (self.a * self.b - self.d)) / self.b
        return self.b / (2.0 * self.a)

    def f_star(self):
        ld = self.logdet_minimizers()
        return np.array([self.of_logdet(x)[i] for i, x in enumerate(ld)])
