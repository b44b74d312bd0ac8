"""Multiobjective steepest descent on a Riemannian manifold.

Each iteration computes the steepest descent direction ``v_k`` at ``p_k``,
stops if ``p_k`` passes the criticality test and otherwise moves along the
geodesic, ``p_{k+1} = exp_{p_k}(t_k v_k)``, with ``t_k`` from the configured
stepsize strategy.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from .direction import EPS_MACHINE, QPSettings, is_critical, solve_direction
from .manifolds import DomainError
from .problem import Counters, evaluate, gradients
from .stepsize import ArmijoConfig, LineSearchError

logger = logging.getLogger(__name__)

CONVERGED = "converged"
MAX_ITER = "max_iter"
LINE_SEARCH_FAILURE = "line_search_failure"
DOMAIN_ERROR = "domain_error"


@dataclass(frozen=True)
class SolverConfig:
    strategy: object = field(default_factory=ArmijoConfig)
    max_iter: int = 10000
    eps_machine: float = EPS_MACHINE
    record_trace: bool = True
    qp: QPSettings = field(default_factory=QPSettings)

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")


@dataclass
class SolverTrace:
    """Per-iterate history of one run.

    ``theta``, ``v_norm`` and ``values`` have one entry per visited point
    ``p_0, ..., p_K``; ``t`` and ``trials`` one entry per step taken.
    ``points`` is filled only when ``record_trace`` is set (the final point
    is always kept).
    """

    theta: list = field(default_factory=list)
    v_norm: list = field(default_factory=list)
    values: list = field(default_factory=list)
    t: list = field(default_factory=list)
    trials: list = field(default_factory=list)
    points: list = field(default_factory=list)
    final_point: np.ndarray | None = None
    termination: str | None = None
    message: str = ""
    evalf: int = 0
    evalg: int = 0

    @property
    def iter_count(self):
        return len(self.t)

    @property
    def converged(self):
        return self.termination == CONVERGED

    @property
    def final_values(self):
        return self.values[-1]

    def values_array(self):
        return np.array(self.values)

    def rows(self):
        """``(k, theta, v_norm, t, f_1..f_m)`` per visited point; ``t`` is NaN at the last one."""
        for k, (theta, vn, f) in enumerate(zip(self.theta, self.v_norm, self.values)):
            t = self.t[k] if k < len(self.t) else float("nan")
            yield (k, theta, vn, t, *f)


def solve(objective, manifold, x0, config=None):
    """Run the descent method from ``x0`` and return its :class:`SolverTrace`.

    The criticality test is applied before every step, including ``k = 0``.
    Line-search failures and domain errors end the run with the trace
    recorded so far and the corresponding termination reason.
    """
    # trial points may overflow; the line searches treat non-finite values as rejections
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        return _solve(objective, manifold, x0, config)


def _solve(objective, manifold, x0, config):
    config = config or SolverConfig()
    strategy = config.strategy
    counters = Counters()
    trace = SolverTrace()
    p = manifold.check_point(x0)
    state = strategy.new_state()

    def finish(reason, message=""):
        trace.termination = reason
        trace.message = message
        trace.final_point = p
        trace.evalf, trace.evalg = counters.evalf, counters.evalg
        return trace

    try:
        f_p = evaluate(objective, p, counters)
    except DomainError as exc:
        return finish(DOMAIN_ERROR, str(exc))

    k = 0
    while True:
        if config.record_trace:
            trace.points.append(p)
        try:
            grads = gradients(objective, manifold, p, counters)
            direction = solve_direction(manifold, p, grads, config.qp)
        except DomainError as exc:
            return finish(DOMAIN_ERROR, str(exc))
        trace.theta.append(direction.theta)
        trace.v_norm.append(direction.v_norm)
        trace.values.append(f_p)

        if is_critical(direction, config.eps_machine):
            return finish(CONVERGED)
        if k >= config.max_iter:
            return finish(MAX_ITER)
        try:
            step = strategy.step(manifold, objective, p, f_p, direction, k, state, counters)
        except LineSearchError as exc:
            logger.debug("line search failed at k=%d: %s", k, exc)
            return finish(LINE_SEARCH_FAILURE, str(exc))
        except (DomainError, OverflowError) as exc:
            return finish(DOMAIN_ERROR, str(exc))
        trace.t.append(step.t)
        trace.trials.append(step.trial_count)
        p, f_p = step.p_next, step.f_next
        k += 1
