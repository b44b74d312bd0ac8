"""
Barrier objectives on the positive orthant
==========================================

With the metric <u, v>_x = sum u_i v_i / x_i^2 the orthant is isometric to
flat space through x = e^z, geodesics never leave it, and no step has to be
clipped at the boundary.
"""

import numpy as np

from paretodescent import SolverConfig, solve
from paretodescent.instances import LogBarrier, PositiveOrthant

rng = np.random.default_rng(3)

for n, m in [(10, 2), (10, 10), (100, 20)]:
    F = LogBarrier.random(n, m, rng)
    man = PositiveOrthant(n)
    its = []
    for _ in range(10):
        tr = solve(F, man, rng.uniform(0.0, 10.0, n), SolverConfig(record_trace=False))
        assert tr.converged
        its.append(tr.iter_count)
    print(f"n={n:3d} m={m:2d}  median it {np.median(its):5.1f}  range {min(its)}-{max(its)}")

# geodesics stay positive however long the step
man = PositiveOrthant(3)
x = np.array([1.0, 0.1, 5.0])
for t in (1, 10, 40):
    print(f"t={t:2d}  min entry of exp_x(-t x): {man.exp(x, -x, t).min():.3g}")
