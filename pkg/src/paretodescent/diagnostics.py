"""Replay checks of a recorded :class:`~paretodescent.solver.SolverTrace`.

These verify the descent inequality, the ``O(1/sqrt(N))`` bound on the
smallest direction norm under bounded-below objectives, and, on manifolds
with a distance and a curvature lower bound, the quasi-Fejer inequality and
the ``O(1/N)`` bound under convexity. None of them run during a solve; they
take a finished trace plus the reference data the bounds depend on (``f*``
or a dominating point ``q``).

Strategy constants used throughout:

============  ==========  ===============
strategy      ``nu``      ``xi``
============  ==========  ===============
lipschitz     ``1/2``     ``epsilon``
adaptive      ``zeta``    ``eta / L``
armijo        ``delta``   ``t_min``
============  ==========  ===============
"""

from dataclasses import dataclass, field

import numpy as np

from .stepsize import AdaptiveConfig, ArmijoConfig, LipschitzConfig


class PreconditionError(ValueError):
    """The reference point does not dominate the recorded iterates."""


@dataclass
class ComplexityReport:
    """Outcome of a complexity replay.

    Attributes
    ----------
    holds : bool
        True when the bound holds for every ``N`` checked.
    bound_constant : float
        ``c`` in ``min ||v_k|| <= c / sqrt(N)`` or ``c / N``.
    per_n : ndarray of bool
        Outcome per ``N = 1, ..., len(per_n)``.
    details : dict
        Intermediate constants (``rho``, ``C``, ``K``, ``i_star`` ...).
    """

    holds: bool
    bound_constant: float
    per_n: np.ndarray
    details: dict = field(default_factory=dict)

    @property
    def sqrt_bound_holds(self):
        return self.per_n


def strategy_nu(strategy):
    return strategy.nu


def strategy_xi(strategy, L=None):
    """Stepsize floor entering the bounds; the adaptive rule needs ``L``."""
    if isinstance(strategy, AdaptiveConfig):
        if L is None:
            raise ValueError("the adaptive strategy needs the Lipschitz constant L")
        return strategy.xi(L)
    return strategy.xi


def rho_for_strategy(strategy, f0, f_q):
    """``rho`` bounding ``sum_k t_k^2 ||v_k||^2`` for a reference point ``q``.

    ``f0`` and ``f_q`` are ``F(p_0)`` and ``F(q)``; the minimum over ``i`` of
    the per-strategy expression is returned.
    """
    gap = np.asarray(f0, dtype=float) - np.asarray(f_q, dtype=float)
    if isinstance(strategy, LipschitzConfig):
        per_i = 2.0 * gap / strategy.L
    elif isinstance(strategy, AdaptiveConfig):
        per_i = gap / (strategy.zeta * strategy.L0)
    elif isinstance(strategy, ArmijoConfig):
        per_i = strategy.t_max * gap / strategy.delta
    else:
        raise TypeError(f"unknown strategy {type(strategy).__name__}")
    return float(np.min(per_i))


def fejer_constant(kappa, d0, rho):
    """``K`` in ``d^2(p_{k+1}, q) <= d^2(p_k, q) + K t_k^2 ||v_k||^2``.

    With ``kh = sqrt(|kappa|)`` and ``r = sqrt(rho)``::

        C = arccosh(cosh(kh d0) exp(0.5 kh r sinh(kh r)))
        K = sinh(kh r) / (kh r) * C / tanh(C)

    For ``kappa = 0`` both ratios tend to 1, so ``K = 1``.
    """
    if kappa > 0:
        raise ValueError("kappa must be nonpositive")
    kh = np.sqrt(-kappa)
    r = np.sqrt(max(rho, 0.0))
    if kh == 0.0:
        return 1.0, 0.0
    x = kh * r
    # for large rho the constants overflow to inf, i.e. the bound is vacuous
    with np.errstate(over="ignore", invalid="ignore"):
        # log-domain: cosh(kh d0) e^{...} can overflow long before C does
        log_arg = np.logaddexp(kh * d0, -kh * d0) - np.log(2.0) + 0.5 * x * np.sinh(x)
        C = float(log_arg + np.log1p(np.sqrt(max(1.0 - np.exp(-2.0 * log_arg), 0.0))))
        ratio_sinh = 1.0 if x == 0.0 else np.sinh(x) / x
        ratio_tanh = 1.0 if C == 0.0 else C / np.tanh(C)
        K = float(ratio_sinh * ratio_tanh)
    return K, C


def verify_descent(trace, nu, rtol=1e-10):
    """True when ``F(p_{k+1}) <= F(p_k) - nu t_k ||v_k||^2`` for every recorded step."""
    return bool(np.all(descent_residuals(trace, nu, rtol) <= 0.0))


def descent_residuals(trace, nu, rtol=1e-10):
    """Per-step worst violation of the descent inequality, after the slack ``rtol (1 + |f|)``."""
    F = np.asarray(trace.values, dtype=float)
    t = np.asarray(trace.t, dtype=float)
    steps = len(t)
    if steps == 0:
        return np.zeros(0)
    vn = np.asarray(trace.v_norm[:steps], dtype=float)
    lhs = F[1:steps + 1]
    rhs = F[:steps] - nu * (t * vn * vn)[:, None]
    slack = rtol * (1.0 + np.abs(F[:steps]))
    return np.max(lhs - rhs - slack, axis=1)


def _running_min(x):
    return np.minimum.accumulate(np.asarray(x, dtype=float))


def check_sqrt_complexity(trace, f_star, xi, nu, rtol=1e-12):
    """``min_{k<N} ||v_k|| <= sqrt((f_i*(p_0) - f*_i*) / (nu xi)) / sqrt(N)``.

    ``i*`` minimizes ``f_i(p_0) - f*_i`` over the finite entries of ``f_star``.
    Checked for every ``N`` from 1 to the number of steps taken (at least 1).
    """
    f0 = np.asarray(trace.values[0], dtype=float)
    f_star = np.asarray(f_star, dtype=float)
    gaps = np.where(np.isfinite(f_star), f0 - f_star, np.inf)
    if not np.any(np.isfinite(gaps)):
        raise ValueError("f_star needs at least one finite entry")
    i_star = int(np.argmin(gaps))
    gap = gaps[i_star]
    c = np.sqrt(gap / (nu * xi)) if gap >= 0 else -np.inf
    n_max = max(trace.iter_count, 1)
    mins = _running_min(trace.v_norm[:n_max])
    N = np.arange(1, mins.size + 1)
    bound = c / np.sqrt(N) if np.isfinite(c) else np.full(N.size, -np.inf)
    per_n = mins <= bound * (1 + rtol)
    return ComplexityReport(bool(per_n.all()), float(c), per_n,
                            {"i_star": i_star, "gap": float(gap)})


def _check_dominating(trace, f_q, tol):
    F = np.asarray(trace.values, dtype=float)
    f_q = np.asarray(f_q, dtype=float)
    if np.any(f_q > F + tol * (1.0 + np.abs(F))):
        raise PreconditionError("q does not dominate every recorded iterate")


def check_rate_complexity(trace, manifold, q, f_q, kappa, xi, nu, rho, tol=1e-12):
    """``min_{k<=N} ||v_k|| <= sqrt(2 (d^2(p_0, q) + K rho) / (nu xi^2)) / N``.

    ``rho`` comes from :func:`rho_for_strategy`; ``K`` from
    :func:`fejer_constant`. ``q`` must dominate every iterate. A single ``q``
    upper-bounds the infimum over the dominating set, so the verified bound is
    never tighter than the exact one.
    """
    _check_dominating(trace, f_q, 1e-12)
    p0 = trace.points[0] if trace.points else None
    if p0 is None:
        raise ValueError("the trace must record points")
    d0 = manifold.distance(p0, q)
    K, C = fejer_constant(kappa, d0, rho)
    c = np.sqrt(2.0 * (d0 * d0 + K * rho) / (nu * xi * xi))
    # min over k = 0..N, for N = 1..K
    mins = _running_min(trace.v_norm)[1:]
    N = np.arange(1, mins.size + 1)
    per_n = mins <= c / N * (1 + tol)
    return ComplexityReport(bool(per_n.all()), float(c), per_n,
                            {"rho": rho, "C": C, "K": K, "d0": d0})


def check_fejer(trace, manifold, q, kappa, rho, f_q=None):
    """Residuals ``d^2(p_{k+1}, q) - d^2(p_k, q) - K t_k^2 ||v_k||^2`` for every step.

    Each should be at most ``1e-8 (1 + d^2(p_k, q))``; see
    :func:`fejer_holds`.
    """
    if f_q is not None:
        _check_dominating(trace, f_q, 1e-12)
    pts = trace.points
    if len(pts) < trace.iter_count + 1:
        raise ValueError("the trace must record points")
    d2 = np.array([manifold.distance(p, q) ** 2 for p in pts[:trace.iter_count + 1]])
    K, _ = fejer_constant(kappa, float(np.sqrt(d2[0])), rho)
    t = np.asarray(trace.t, dtype=float)
    vn = np.asarray(trace.v_norm[:t.size], dtype=float)
    return d2[1:] - d2[:-1] - K * (t * vn) ** 2, d2[:-1]


def fejer_holds(residuals, d2, rtol=1e-8):
    return bool(np.all(residuals <= rtol * (1.0 + d2)))
