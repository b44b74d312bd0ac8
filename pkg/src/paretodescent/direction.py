"""Steepest descent direction for a vector objective at a point.

The direction subproblem

    min_v  max_i <grad f_i(p), v> + 0.5 ||v||^2

is solved through its dual: find simplex weights ``mu`` minimizing
``0.5 mu^T M mu`` with ``M`` the Gram matrix of the Riemannian gradients,
then ``v = -sum_i mu_i grad f_i(p)``. The dual lives in ``R^m`` regardless of
the manifold dimension.
"""

from dataclasses import dataclass, field

import numpy as np

EPS_MACHINE = 2.0 ** -52


@dataclass(frozen=True)
class QPSettings:
    tolerance: float = 1e-10
    # None means 10 m^2 + 100.
    max_inner_iter: int | None = None

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")


@dataclass
class DirectionResult:
    """Solution of the direction subproblem.

    Attributes
    ----------
    v : ndarray
        Steepest descent direction, a tangent vector at the point.
    theta : float
        Optimal value ``max_i <g_i, v> + 0.5 ||v||^2``.
    mu : ndarray
        Simplex weights with ``v = -sum_i mu_i g_i``.
    kkt_residual : float
        Frank-Wolfe gap of the dual, divided by ``max(1, max_i ||g_i||^2)``.
    slopes : ndarray
        Directional derivatives ``<g_i, v>``.
    v_norm_sq : float
        ``||v||^2``.
    exact : bool
        False when the inner iteration budget ran out before the tolerance.
    """

    v: np.ndarray
    theta: float
    mu: np.ndarray
    kkt_residual: float
    slopes: np.ndarray
    v_norm_sq: float
    exact: bool = True
    v_norm: float = field(init=False)

    def __post_init__(self):
        self.v_norm = float(np.sqrt(self.v_norm_sq))


def gram_matrix(manifold, p, grads):
    M = np.asarray(manifold.gram(p, grads), dtype=float)
    return 0.5 * (M + M.T)


def project_simplex(y):
    """Euclidean projection onto the unit simplex (sort-based, exact)."""
    y = np.asarray(y, dtype=float)
    u = np.sort(y)[::-1]
    css = np.cumsum(u) - 1.0
    ind = np.arange(1, y.size + 1)
    rho = np.nonzero(u - css / ind > 0)[0][-1]
    tau = css[rho] / (rho + 1.0)
    return np.maximum(y - tau, 0.0)


def _fw_gap(M, mu):
    g = M @ mu
    return float(mu @ g - g.min()), g


def _polish(M, mu):
    """Minimize over the affine hull of the current face; None if infeasible."""
    support = np.flatnonzero(mu > 0)
    k = support.size
    if k == 1:
        return None
    K = np.zeros((k + 1, k + 1))
    K[:k, :k] = M[np.ix_(support, support)]
    K[:k, k] = K[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    sol = np.linalg.lstsq(K, rhs, rcond=None)[0]
    w = sol[:k]
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        return None
    out = np.zeros_like(mu)
    out[support] = w / w.sum()
    return out


def min_norm_weights(M, tolerance=1e-10, max_iter=None):
    """Minimize ``0.5 mu^T M mu`` over the unit simplex.

    Closed form for ``m <= 2``; otherwise projected gradient with
    Barzilai-Borwein steplengths and exact line search along the projected
    direction, interleaved with a solve restricted to the current face.
    Terminates on the scaled Frank-Wolfe gap.

    Returns ``(mu, residual, exact)``.
    """
    m = M.shape[0]
    if m == 1:
        return np.ones(1), 0.0, True
    if m == 2:
        m00, m01, m11 = float(M[0, 0]), float(M[0, 1]), float(M[1, 1])
        denom = m00 - 2.0 * m01 + m11
        if denom <= 0.0:
            mu0 = 0.5
        else:
            mu0 = min(1.0, max(0.0, (m11 - m01) / denom))
        mu1 = 1.0 - mu0
        g0, g1 = m00 * mu0 + m01 * mu1, m01 * mu0 + m11 * mu1
        gap = mu0 * g0 + mu1 * g1 - min(g0, g1)
        return np.array([mu0, mu1]), max(gap, 0.0) / max(1.0, m00, m11), True

    scale = max(1.0, float(np.max(np.diag(M))))

    if max_iter is None:
        max_iter = 10 * m * m + 100
    lam_max = float(np.linalg.eigvalsh(M)[-1])
    fallback = 1.0 / lam_max if lam_max > 0 else 1.0

    mu = np.zeros(m)
    mu[int(np.argmin(np.diag(M)))] = 1.0
    gap, g = _fw_gap(M, mu)
    alpha = fallback
    best, best_gap = mu, gap
    support = None
    for _ in range(max_iter):
        if gap <= tolerance * scale:
            return mu, max(gap, 0.0) / scale, True
        new_support = tuple(np.flatnonzero(mu > 0))
        if new_support != support:
            support = new_support
            cand = _polish(M, mu)
            if cand is not None:
                cand_gap, cand_g = _fw_gap(M, cand)
                if cand @ cand_g <= mu @ g:
                    mu, gap, g = cand, cand_gap, cand_g
                    if gap <= tolerance * scale:
                        return mu, max(gap, 0.0) / scale, True
        d = project_simplex(mu - alpha * g) - mu
        slope = float(g @ d)
        if slope >= 0.0:
            # projected step stalled; take a Frank-Wolfe step instead
            d = -mu.copy()
            d[int(np.argmin(g))] += 1.0
            slope = float(g @ d)
            if slope >= 0.0:
                break
        Md = M @ d
        curv = float(d @ Md)
        step = 1.0 if curv <= 0.0 else min(1.0, -slope / curv)
        mu = np.maximum(mu + step * d, 0.0)
        mu /= mu.sum()
        s_dot_y = step * step * curv
        alpha = step * step * float(d @ d) / s_dot_y if s_dot_y > 0 else fallback
        gap, g = _fw_gap(M, mu)
        if gap < best_gap:
            best, best_gap = mu, gap
    if gap <= tolerance * scale:
        return mu, max(gap, 0.0) / scale, True
    return best, max(best_gap, 0.0) / scale, False


def solve_direction(manifold, p, grads, settings=None, gram=None):
    """Steepest descent direction at ``p`` from the batch of gradients ``grads``."""
    grads = np.asarray(grads, dtype=float)
    m = grads.shape[0] if grads.ndim else 0
    if m == 0:
        raise ValueError("at least one gradient is required")
    settings = settings or QPSettings()
    M = gram_matrix(manifold, p, grads) if gram is None else gram
    if not np.any(M):
        return DirectionResult(np.zeros_like(grads[0]), 0.0, np.full(m, 1.0 / m),
                               0.0, np.zeros(m), 0.0)
    mu, residual, exact = min_norm_weights(M, settings.tolerance, settings.max_inner_iter)
    Mmu = M @ mu
    v = -(mu @ grads.reshape(m, -1)).reshape(grads.shape[1:])
    v_norm_sq = max(float(mu @ Mmu), 0.0)
    slopes = -Mmu
    # <= 0 in exact arithmetic; rounding in M mu can push it a hair above
    theta = min(float(slopes.max()) + 0.5 * v_norm_sq, 0.0)
    return DirectionResult(v, theta, mu, residual, slopes, v_norm_sq, exact)


def is_critical(result, eps_machine=EPS_MACHINE):
    """Stopping test ``theta >= -5 sqrt(eps)``."""
    return result.theta >= -5.0 * np.sqrt(eps_machine)
