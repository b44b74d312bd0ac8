"""Bundled manifold/objective families."""

from .orthant import FlatLogBarrier, LogBarrier, PositiveOrthant
from .rosenbrock import FlatRosenbrock, Rosenbrock, RosenbrockManifold
from .spd import LogDet, SPDMatrices

__all__ = [
    "FlatLogBarrier",
    "FlatRosenbrock",
    "LogBarrier",
    "LogDet",
    "PositiveOrthant",
    "Rosenbrock",
    "RosenbrockManifold",
    "SPDMatrices",
]
