"""Vector objectives ``F = (f_1, ..., f_m)`` and evaluation accounting."""

from dataclasses import dataclass

import numpy as np


@dataclass
class Counters:
    """Per-run evaluation counts.

    Each coordinate function counts separately, so one evaluation of ``F``
    adds ``m`` to ``evalf`` and one batch of gradients adds ``m`` to ``evalg``.
    """

    evalf: int = 0
    evalg: int = 0


class VectorObjective:
    """Base class for ``F: M -> R^m``.

    Subclasses implement :meth:`value` and :meth:`egrad` (Euclidean
    derivatives, stacked along axis 0). The Riemannian gradients are obtained
    through the manifold unless :meth:`gradients` is overridden with a closed
    form.
    """

    m = 1

    def value(self, p):
        raise NotImplementedError

    def egrad(self, p):
        raise NotImplementedError

    def gradients(self, p, manifold):
        return manifold.egrad2rgrad(p, self.egrad(p))


def evaluate(objective, p, counters=None):
    values = np.asarray(objective.value(p), dtype=float)
    if counters is not None:
        counters.evalf += objective.m
    return values


def gradients(objective, manifold, p, counters=None):
    grads = np.asarray(objective.gradients(p, manifold), dtype=float)
    if counters is not None:
        counters.evalg += objective.m
    return grads


def check_gradient(objective, manifold, p, i, h=1e-6):
    """Finite-difference check of the ``i``-th Riemannian gradient at ``p``.

    Along each vector ``v`` of an orthonormal tangent basis, compares the
    forward difference ``(f_i(exp_p(h v)) - f_i(p)) / h`` with
    ``<grad f_i(p), v>`` and returns the largest discrepancy divided by
    ``1 + ||grad f_i(p)||``.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    f0 = objective.value(p)[i]
    g = objective.gradients(p, manifold)[i]
    scale = 1.0 + manifold.norm(p, g)
    worst = 0.0
    for v in manifold.tangent_basis(p):
        fd = (objective.value(manifold.exp(p, v, h))[i] - f0) / h
        worst = max(worst, abs(fd - manifold.inner(p, g, v)))
    return worst / scale


class Quadratic(VectorObjective):
    """``f_i(x) = 0.5 * ||x - c_i||^2`` on Euclidean space; mainly for tests."""

    def __init__(self, centers):
        self.centers = np.atleast_2d(np.asarray(centers, dtype=float))
        self.m = self.centers.shape[0]

    def value(self, x):
        d = x - self.centers
        return 0.5 * np.einsum("ij,ij->i", d, d)

    def egrad(self, x):
        return x - self.centers
