"""Stepsize strategies: fixed Lipschitz step, adaptive backtracking, Armijo-type.

Every strategy exposes the same small interface to the solver::

    state = strategy.new_state()
    result = strategy.step(manifold, objective, p, f_p, direction, k, state, counters)

Sufficient-decrease tests are componentwise and exact, i.e.
``f_next[j] <= f_p[j] - c * t * ||v||^2`` for every ``j`` with no slack.
"""

from dataclasses import dataclass, field

import numpy as np

from .manifolds import DomainError
from .problem import evaluate


class LineSearchError(RuntimeError):
    """The backtracking loop exhausted its trial budget."""


@dataclass
class StepResult:
    t: float
    trial_count: int
    f_next: np.ndarray
    p_next: np.ndarray
    trials: list = field(default_factory=list)


def sufficient_decrease(f_next, f_p, c, t, v_norm_sq):
    return bool((f_next <= f_p - c * t * v_norm_sq).all())


def _try(manifold, objective, p, v, t, counters):
    """Evaluate ``F(exp_p(t v))``; non-finite or infeasible trials come back as None."""
    try:
        q = manifold.exp(p, v, t)
        f = evaluate(objective, q, counters)
    except (DomainError, OverflowError, FloatingPointError, np.linalg.LinAlgError):
        if counters is not None:
            counters.evalf += objective.m
        return None, None
    if not np.isfinite(f).all():
        return q, None
    return q, f


# ---------------------------------------------------------------- fixed step

@dataclass(frozen=True)
class LipschitzConfig:
    """Constant step ``t = 1/L``; ``epsilon`` is the stepsize floor, ``0 < epsilon < 1/L``."""

    L: float
    epsilon: float | None = None
    name = "lipschitz"

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError("L must be positive")
        eps = self.epsilon if self.epsilon is not None else 0.5 / self.L
        if not 0 < eps < 1.0 / self.L:
            raise ValueError("epsilon must lie in (0, 1/L)")
        object.__setattr__(self, "epsilon", eps)

    @property
    def nu(self):
        return 0.5

    @property
    def xi(self):
        return self.epsilon

    def new_state(self):
        return None

    def step(self, manifold, objective, p, f_p, direction, k, state, counters=None):
        t = lipschitz_step(self)
        p_next = manifold.exp(p, direction.v, t)
        f_next = evaluate(objective, p_next, counters)
        return StepResult(t, 1, f_next, p_next, [t])


def lipschitz_step(cfg):
    return 1.0 / cfg.L


# ---------------------------------------------------------------- adaptive backtracking

@dataclass(frozen=True)
class AdaptiveConfig:
    """Backtracking from the previous step: ``t_k = eta^i t_{k-1}``, ``t_0 = 1/L0``."""

    zeta: float = 0.5
    L0: float = 1.0
    eta: float = 0.5
    max_trials: int = 100
    name = "adaptive"

    def __post_init__(self):
        if not 0 < self.zeta <= 0.5:
            raise ValueError("zeta must lie in (0, 1/2]")
        if not self.L0 > 0:
            raise ValueError("L0 must be positive")
        if not 0 < self.eta < 1:
            raise ValueError("eta must lie in (0, 1)")

    @property
    def nu(self):
        return self.zeta

    def xi(self, L):
        """Stepsize floor ``eta / L`` valid when ``L0 <= L``."""
        return self.eta / L

    def new_state(self):
        return AdaptiveState(1.0 / self.L0)

    def step(self, manifold, objective, p, f_p, direction, k, state, counters=None):
        return adaptive_step(manifold, objective, p, direction.v, f_p,
                             direction.v_norm_sq, self, state, counters)


@dataclass
class AdaptiveState:
    t_prev: float


def adaptive_step(manifold, objective, p, v, f_p, v_norm_sq, cfg, state, counters=None):
    """Smallest ``i >= 0`` with ``F(exp_p(eta^i t_prev v)) <= F(p) - zeta eta^i t_prev ||v||^2 e``."""
    if not v_norm_sq > 0:
        raise ValueError("adaptive step needs a nonzero direction")
    trials = []
    t = state.t_prev
    for i in range(cfg.max_trials):
        trials.append(t)
        q, f = _try(manifold, objective, p, v, t, counters)
        if f is not None and sufficient_decrease(f, f_p, cfg.zeta, t, v_norm_sq):
            state.t_prev = t
            return StepResult(t, i + 1, f, q, trials)
        t *= cfg.eta
    raise LineSearchError(f"adaptive step: no acceptable step after {cfg.max_trials} trials")


# ---------------------------------------------------------------- Armijo search

@dataclass(frozen=True)
class ArmijoConfig:
    """Armijo-type backtracking with safeguarded quadratic interpolation.

    ``first_trial`` is either ``"shanno_phua"`` or a fixed float in
    ``[t_min, t_max]``. ``safeguard`` selects what happens when the
    interpolated step leaves ``[omega1 t, omega2 t]``: ``"clamp"`` projects it
    onto the interval, ``"upper"`` always takes ``omega2 t``.
    """

    delta: float = 1e-4
    t_min: float = 1e-2
    t_max: float = 1e2
    omega1: float = 0.05
    omega2: float = 0.95
    first_trial: object = "shanno_phua"
    safeguard: str = "clamp"
    max_trials: int = 100
    name = "armijo"

    def __post_init__(self):
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")
        if not 0 < self.t_min < self.t_max:
            raise ValueError("need 0 < t_min < t_max")
        if not 0 < self.omega1 < self.omega2 < 1:
            raise ValueError("need 0 < omega1 < omega2 < 1")
        if self.safeguard not in ("clamp", "upper"):
            raise ValueError("safeguard must be 'clamp' or 'upper'")
        if self.first_trial != "shanno_phua":
            t0 = float(self.first_trial)
            if not self.t_min <= t0 <= self.t_max:
                raise ValueError("fixed first trial must lie in [t_min, t_max]")
            object.__setattr__(self, "first_trial", t0)

    @property
    def nu(self):
        return self.delta

    @property
    def xi(self):
        return self.t_min

    def new_state(self):
        return ArmijoState()

    def step(self, manifold, objective, p, f_p, direction, k, state, counters=None):
        if self.first_trial == "shanno_phua":
            t0 = shanno_phua_first_trial(k, state.t_prev, state.v_norm_prev,
                                         direction.v_norm, self)
        else:
            t0 = self.first_trial
        result = armijo_step(manifold, objective, p, direction.v, f_p, direction.slopes,
                             direction.v_norm_sq, self, t0, counters)
        state.t_prev = result.t
        state.v_norm_prev = direction.v_norm
        return result


@dataclass
class ArmijoState:
    t_prev: float | None = None
    v_norm_prev: float | None = None


def shanno_phua_first_trial(k, t_prev, v_norm_prev, v_norm, cfg):
    """Safeguarded first trial: ``1/||v_0||`` at ``k = 0``, else
    ``t_{k-1} ||v_{k-1}||^2 / ||v_k||^2``, clamped to ``[t_min, t_max]``."""
    if not v_norm > 0:
        raise ValueError("v_norm must be positive")
    if k == 0 or t_prev is None:
        t_bar = 1.0 / v_norm
    else:
        t_bar = t_prev * v_norm_prev ** 2 / v_norm ** 2
    return max(cfg.t_min, min(t_bar, cfg.t_max))


def interpolate_trial(t, f0, slope, ft, omega1, omega2, safeguard="clamp"):
    """Next trial from the quadratic through ``f(0)``, ``f'(0)`` and ``f(t)``.

    With ``safeguard="clamp"`` the minimizer is clamped to
    ``[omega1 t, omega2 t]``; with ``"upper"`` a minimizer outside that
    interval is replaced by ``omega2 t``. A non-convex model falls back to
    ``omega2 t`` and a non-finite trial value to ``omega1 t``.
    """
    if not np.isfinite(ft):
        return omega1 * t
    curv = (ft - f0 - slope * t) / (t * t)
    if curv > 0:
        s = -slope / (2.0 * curv)
        if safeguard == "clamp":
            return min(max(s, omega1 * t), omega2 * t)
        if omega1 * t <= s <= omega2 * t:
            return s
    return omega2 * t


def armijo_step(manifold, objective, p, v, f_p, slopes, v_norm_sq, cfg, t0, counters=None):
    """First trial satisfying ``F(exp_p(t v)) <= F(p) - delta t ||v||^2 e``.

    Rejected trials are replaced by interpolating the coordinate function with
    the largest violation of the decrease test.
    """
    if not v_norm_sq > 0:
        raise ValueError("Armijo step needs a nonzero direction")
    t = t0
    trials = []
    for n_trial in range(1, cfg.max_trials + 1):
        trials.append(t)
        q, f = _try(manifold, objective, p, v, t, counters)
        if f is not None:
            target = f_p - cfg.delta * t * v_norm_sq
            if (f <= target).all():
                return StepResult(t, n_trial, f, q, trials)
            j = int(np.argmax(f - target))
            t = interpolate_trial(t, f_p[j], slopes[j], f[j], cfg.omega1, cfg.omega2,
                                  cfg.safeguard)
        else:
            t = cfg.omega1 * t
    raise LineSearchError(f"Armijo step: no acceptable step after {cfg.max_trials} trials")
