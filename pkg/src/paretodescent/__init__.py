"""Multiobjective steepest descent on Riemannian manifolds.

The solver moves along geodesics in the direction that decreases every
objective at once, with a fixed, adaptive or Armijo-type stepsize, and stops
at Pareto critical points.
"""

from .direction import DirectionResult, QPSettings, is_critical, solve_direction
from .manifolds import CapabilityError, DomainError, Euclidean, Manifold, ManifoldDescriptor
from .problem import Counters, VectorObjective, check_gradient
from .solver import SolverConfig, SolverTrace, solve
from .stepsize import AdaptiveConfig, ArmijoConfig, LineSearchError, LipschitzConfig

__all__ = [
    "AdaptiveConfig",
    "ArmijoConfig",
    "CapabilityError",
    "Counters",
    "DirectionResult",
    "DomainError",
    "Euclidean",
    "LineSearchError",
    "LipschitzConfig",
    "Manifold",
    "ManifoldDescriptor",
    "QPSettings",
    "SolverConfig",
    "SolverTrace",
    "VectorObjective",
    "check_gradient",
    "is_critical",
    "solve",
    "solve_direction",
]
